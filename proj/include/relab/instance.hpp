#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "relab/relation.hpp"

namespace relab {

using Json = nlohmann::ordered_json;

// A named input object. Relations and subspaces keep the generators they were written with.
struct InstanceObject {
  enum class Kind { relation, matrix, subspace };
  Kind kind = Kind::relation;
  // relation: source and target space; matrix: row and column space; subspace: space (first).
  std::string first;
  std::string second;
  // relation: (p + q) x k stacked generators; subspace: n x k generators; matrix: the entries.
  Matrix data;
};

struct Command {
  std::string op;
  std::map<std::string, std::string> args;
  std::map<std::string, std::string> params;
  std::optional<std::string> output;
  // Optional checks, kept as written.
  Json expect;
  Json expect_distinct;
  Json expect_fields;
  std::optional<std::string> expect_error;
  std::optional<double> tol;
  std::optional<double> min_gap;
};

struct Instance {
  std::string name;
  std::map<std::string, Index> dims;
  std::optional<Tolerance> tolerance;
  std::map<std::string, InstanceObject> objects;
  std::vector<Command> commands;
  Json meta;
};

// Parsing throws InputError (with line/column for syntax errors and a JSON path for schema
// errors) or DimensionMismatch naming the offending object.
Instance parse_instance(const std::string& text, const std::string& source = "<input>");
Json serialize_instance(const Instance& inst);

// Serialized forms used in instances and reports.
Json complex_to_json(Complex z);
// Canonical generators: reduced row echelon form of the basis, entries below 1e-13 snapped to 0.
Json relation_to_json(const Relation& r);
Json subspace_to_json(const Subspace& s);
std::string fingerprint(const Relation& r);

enum class Status { pass = 0, fail = 1, error = 2 };
const char* to_string(Status s);

struct RunOptions {
  std::optional<double> tol_gap;
  std::optional<double> tol_rank;
  // Adds per-command wall time to the report, which makes it run-dependent.
  bool timing = false;
};

struct RunOutcome {
  Status status = Status::pass;
  Json report;
};

// Executes the commands in order. Input problems are reported with status error rather than
// thrown, so one bad file does not abort a batch.
RunOutcome run_instance(const Instance& inst, const RunOptions& opts = {});
RunOutcome run_text(const std::string& text, const std::string& source, const RunOptions& opts = {});
RunOutcome run_file(const std::string& path, const RunOptions& opts = {});

// Runs files on up to `jobs` threads; reports are merged in file order.
RunOutcome verify_files(const std::vector<std::string>& paths, const RunOptions& opts = {}, unsigned jobs = 0);

int exit_code(Status s);

// Random instance for a profile: factorized-left, maximal-pair, general-sectorial,
// nonnegative-symmetric. Deterministic in (seed, n, profile).
Instance gen_random(std::uint64_t seed, Index n, const std::string& profile);
const std::vector<std::string>& profiles();

// Pretty-printed JSON text with a trailing newline.
std::string dump(const Json& j);

}  // namespace relab

#include "relab/instance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "relab/errors.hpp"
#include "relab/factorized.hpp"
#include "relab/formsum.hpp"
#include "relab/oracles.hpp"
#include "relab/random.hpp"

namespace relab {

namespace {

constexpr double kSnap = 1e-13;
constexpr double kPivot = 1e-8;
constexpr double kFieldRel = 1e-8;
constexpr double kDefaultMinGap = 0.1;

using Value = std::variant<Relation, Matrix, Subspace>;

// ---------------------------------------------------------------------------------------------
// Parsing

[[noreturn]] void bad(const std::string& path, const std::string& what) { throw InputError(path + ": " + what); }

const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(path, "missing \"" + key + "\"");
  return *it;
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

Complex get_complex(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  bad(path, "expected a number or an [re, im] pair");
}

Vector get_vector(const Json& j, const std::string& path, Index dim, const std::string& object, const std::string& space) {
  if (!j.is_array()) bad(path, "expected an array of scalars");
  if (static_cast<Index>(j.size()) != dim) {
    throw DimensionMismatch(path + ": object '" + object + "' has a vector with " + std::to_string(j.size()) +
                            " entries but space " + space + " has dimension " + std::to_string(dim));
  }
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = get_complex(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  return v;
}

Index space_dim(const Instance& inst, const std::string& space, const std::string& path) {
  const auto it = inst.dims.find(space);
  if (it == inst.dims.end()) bad(path, "unknown space \"" + space + "\"");
  return it->second;
}

InstanceObject parse_object(const Instance& inst, const std::string& name, const Json& j, const std::string& path) {
  InstanceObject obj;
  const std::string kind = get_string(member(j, "kind", path), path + ".kind");
  if (kind == "relation") {
    obj.kind = InstanceObject::Kind::relation;
    obj.first = get_string(member(j, "from", path), path + ".from");
    obj.second = get_string(member(j, "to", path), path + ".to");
    const Index p = space_dim(inst, obj.first, path + ".from");
    const Index q = space_dim(inst, obj.second, path + ".to");
    if (j.contains("matrix")) {
      // Everywhere-defined operator given by its q x p matrix, stored as generators (e_i, M e_i).
      const Json& rows = j["matrix"];
      const std::string mpath = path + ".matrix";
      if (!rows.is_array() || static_cast<Index>(rows.size()) != q) {
        throw DimensionMismatch(mpath + ": object '" + name + "' needs " + std::to_string(q) + " rows (space " + obj.second + ")");
      }
      Matrix m(q, p);
      for (Index i = 0; i < q; ++i) {
        m.row(i) = get_vector(rows[static_cast<std::size_t>(i)], mpath + "[" + std::to_string(i) + "]", p, name, obj.first).transpose();
      }
      obj.data.resize(p + q, p);
      obj.data << Matrix::Identity(p, p), m;
      return obj;
    }
    const Json& gens = member(j, "generators", path);
    const std::string gpath = path + ".generators";
    if (!gens.is_array()) bad(gpath, "expected an array of [f, f'] pairs");
    obj.data.resize(p + q, static_cast<Index>(gens.size()));
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const std::string kp = gpath + "[" + std::to_string(k) + "]";
      if (!gens[k].is_array() || gens[k].size() != 2) bad(kp, "expected a pair [f, f']");
      obj.data.col(static_cast<Index>(k)) << get_vector(gens[k][0], kp + "[0]", p, name, obj.first),
          get_vector(gens[k][1], kp + "[1]", q, name, obj.second);
    }
  } else if (kind == "subspace") {
    obj.kind = InstanceObject::Kind::subspace;
    obj.first = get_string(member(j, "space", path), path + ".space");
    const Index n = space_dim(inst, obj.first, path + ".space");
    const Json& gens = member(j, "generators", path);
    if (!gens.is_array()) bad(path + ".generators", "expected an array of vectors");
    obj.data.resize(n, static_cast<Index>(gens.size()));
    for (std::size_t k = 0; k < gens.size(); ++k) {
      obj.data.col(static_cast<Index>(k)) = get_vector(gens[k], path + ".generators[" + std::to_string(k) + "]", n, name, obj.first);
    }
  } else if (kind == "matrix") {
    obj.kind = InstanceObject::Kind::matrix;
    obj.first = get_string(member(j, "rows", path), path + ".rows");
    obj.second = get_string(member(j, "cols", path), path + ".cols");
    const Index r = space_dim(inst, obj.first, path + ".rows");
    const Index c = space_dim(inst, obj.second, path + ".cols");
    const Json& entries = member(j, "entries", path);
    if (!entries.is_array() || static_cast<Index>(entries.size()) != r) {
      throw DimensionMismatch(path + ".entries: matrix '" + name + "' needs " + std::to_string(r) + " rows (space " + obj.first + ")");
    }
    obj.data.resize(r, c);
    for (Index i = 0; i < r; ++i) {
      obj.data.row(i) =
          get_vector(entries[static_cast<std::size_t>(i)], path + ".entries[" + std::to_string(i) + "]", c, name, obj.second).transpose();
    }
  } else {
    bad(path + ".kind", "unknown kind \"" + kind + "\" (expected relation, subspace or matrix)");
  }
  return obj;
}

// ---------------------------------------------------------------------------------------------
// Operations

enum class ArgKind { relation, matrix, subspace };

struct OpSpec {
  std::vector<std::pair<std::string, ArgKind>> args;
  std::vector<std::pair<std::string, std::vector<std::string>>> params;
};

const std::map<std::string, OpSpec>& op_table() {
  using A = ArgKind;
  static const std::map<std::string, OpSpec> table = {
      {"adjoint", {{{"r", A::relation}}, {}}},
      {"inverse", {{{"r", A::relation}}, {}}},
      {"compose", {{{"r2", A::relation}, {"r1", A::relation}}, {}}},
      {"operator_sum", {{{"r1", A::relation}, {"r2", A::relation}}, {}}},
      {"operator_part", {{{"r", A::relation}}, {}}},
      {"restrict", {{{"r", A::relation}, {"l", A::subspace}}, {}}},
      {"parts", {{{"r", A::relation}}, {}}},
      {"gap", {{{"a", A::relation}, {"b", A::relation}}, {}}},
      {"analyze", {{{"r", A::relation}}, {}}},
      {"sqrt_nonneg", {{{"a", A::relation}}, {}}},
      {"decompose", {{{"h", A::relation}}, {}}},
      {"friedrichs_oracle", {{{"s", A::relation}}, {}}},
      {"krein_oracle", {{{"s", A::relation}}, {}}},
      {"extremal_oracle", {{{"h", A::relation}, {"s", A::relation}}, {}}},
      {"extension_family", {{{"s", A::relation}, {"l", A::subspace}}, {}}},
      {"oracle_order", {{{"s", A::relation}}, {}}},
      {"factorize", {{{"t", A::relation}, {"b", A::matrix}}, {{"side", {"left", "right"}}}}},
      {"factorized_identities", {{{"t", A::relation}, {"b", A::matrix}}, {}}},
      {"friedrichs_factorized", {{{"t", A::relation}, {"b", A::matrix}}, {}}},
      {"krein_factorized", {{{"t", A::relation}, {"b", A::matrix}}, {}}},
      {"extremal_factorized", {{{"t", A::relation}, {"b", A::matrix}, {"l", A::subspace}}, {}}},
      {"abstract_model", {{{"t", A::relation}, {"b", A::matrix}}, {}}},
      {"recover", {{{"s", A::relation}}, {{"mode", {"friedrichs", "krein"}}}}},
      {"assemble", {{{"h1", A::relation}, {"h2", A::relation}}, {}}},
      {"friedrichs_sum", {{{"h1", A::relation}, {"h2", A::relation}}, {}}},
      {"krein_sum", {{{"h1", A::relation}, {"h2", A::relation}}, {}}},
      {"formsum", {{{"h1", A::relation}, {"h2", A::relation}}, {}}},
      {"extremal_sum", {{{"h1", A::relation}, {"h2", A::relation}, {"l", A::subspace}}, {}}},
      {"extremality_report", {{{"h1", A::relation}, {"h2", A::relation}}, {}}},
  };
  return table;
}

const std::map<std::string, std::string>& error_kinds() {
  static const std::map<std::string, std::string> kinds = {
      {"dimension_mismatch", ""}, {"precondition", ""},        {"not_sectorial", ""},     {"not_maximal_sectorial", ""},
      {"ill_defined_form", ""},   {"not_factorizable", ""},    {"assumption_not_met", ""}, {"unsupported_side", ""},
      {"internal_inconsistency", ""},
  };
  return kinds;
}

Command parse_command(const Json& j, const std::string& path, std::set<std::string>& defined) {
  Command c;
  c.op = get_string(member(j, "op", path), path + ".op");
  const auto it = op_table().find(c.op);
  if (it == op_table().end()) bad(path + ".op", "unknown op \"" + c.op + "\"");
  const OpSpec& spec = it->second;
  for (const auto& [key, value] : j.items()) {
    static const std::set<std::string> allowed = {"op", "args", "params", "output", "expect", "expect_distinct",
                                                  "expect_fields", "expect_error", "tol", "min_gap"};
    if (!allowed.count(key)) bad(path, "unknown field \"" + key + "\"");
  }
  const Json args = j.value("args", Json::object());
  if (!args.is_object()) bad(path + ".args", "expected an object");
  for (const auto& [name, kind] : spec.args) {
    if (!args.contains(name)) bad(path + ".args", "op " + c.op + " needs argument \"" + name + "\"");
    const std::string ref = get_string(args[name], path + ".args." + name);
    if (!defined.count(ref)) bad(path + ".args." + name, "unknown object \"" + ref + "\"");
    c.args[name] = ref;
  }
  for (const auto& [key, value] : args.items()) {
    if (!c.args.count(key)) bad(path + ".args." + key, "op " + c.op + " takes no argument \"" + key + "\"");
  }
  const Json params = j.value("params", Json::object());
  if (!params.is_object()) bad(path + ".params", "expected an object");
  for (const auto& [key, value] : params.items()) {
    const auto p = std::find_if(spec.params.begin(), spec.params.end(), [&](const auto& s) { return s.first == key; });
    if (p == spec.params.end()) bad(path + ".params." + key, "op " + c.op + " takes no parameter \"" + key + "\"");
    const std::string v = get_string(value, path + ".params." + key);
    if (std::find(p->second.begin(), p->second.end(), v) == p->second.end()) {
      bad(path + ".params." + key, "invalid value \"" + v + "\"");
    }
    c.params[key] = v;
  }
  if (j.contains("output")) {
    c.output = get_string(j["output"], path + ".output");
    defined.insert(*c.output);
  }
  if (j.contains("expect")) c.expect = j["expect"];
  if (j.contains("expect_distinct")) c.expect_distinct = j["expect_distinct"];
  if (j.contains("expect_fields")) {
    c.expect_fields = j["expect_fields"];
    if (!c.expect_fields.is_object()) bad(path + ".expect_fields", "expected an object");
  }
  if (j.contains("expect_error")) {
    c.expect_error = get_string(j["expect_error"], path + ".expect_error");
    if (!error_kinds().count(*c.expect_error)) bad(path + ".expect_error", "unknown error kind \"" + *c.expect_error + "\"");
  }
  if (j.contains("tol")) {
    if (!j["tol"].is_number() || j["tol"].get<double>() <= 0.0) bad(path + ".tol", "expected a positive number");
    c.tol = j["tol"].get<double>();
  }
  if (j.contains("min_gap")) {
    if (!j["min_gap"].is_number()) bad(path + ".min_gap", "expected a number");
    c.min_gap = j["min_gap"].get<double>();
  }
  return c;
}

// ---------------------------------------------------------------------------------------------
// Serialization helpers

// Values within kSnap of an integer are written as that integer.
double snap(double x) {
  const double r = std::round(x);
  return std::abs(x - r) < kSnap * std::max(1.0, std::abs(x)) ? r + 0.0 : x;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

// Rows of the reduced row echelon form of basis^T, i.e. a canonical generator list.
Matrix echelon(const Matrix& basis) {
  Matrix a = basis.transpose();
  const Index rows = a.rows();
  const Index cols = a.cols();
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index best = r;
    for (Index i = r + 1; i < rows; ++i) {
      if (std::abs(a(i, c)) > std::abs(a(best, c))) best = i;
    }
    if (std::abs(a(best, c)) < kPivot) continue;
    a.row(r).swap(a.row(best));
    a.row(r) /= a(r, c);
    for (Index i = 0; i < rows; ++i) {
      if (i != r) a.row(i) -= a(i, c) * a.row(r);
    }
    a(r, c) = 1.0;
    for (Index i = 0; i < rows; ++i) {
      if (i != r) a(i, c) = 0.0;
    }
    ++r;
  }
  return a.topRows(r).transpose();
}

Json double_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json object_to_json(const InstanceObject& obj, Index split) {
  Json j = Json::object();
  switch (obj.kind) {
    case InstanceObject::Kind::relation: {
      j["kind"] = "relation";
      j["from"] = obj.first;
      j["to"] = obj.second;
      Json gens = Json::array();
      for (Index k = 0; k < obj.data.cols(); ++k) {
        gens.push_back(Json::array({vector_to_json(obj.data.col(k).head(split)),
                                    vector_to_json(obj.data.col(k).tail(obj.data.rows() - split))}));
      }
      j["generators"] = gens;
      break;
    }
    case InstanceObject::Kind::subspace: {
      j["kind"] = "subspace";
      j["space"] = obj.first;
      Json gens = Json::array();
      for (Index k = 0; k < obj.data.cols(); ++k) gens.push_back(vector_to_json(obj.data.col(k)));
      j["generators"] = gens;
      break;
    }
    case InstanceObject::Kind::matrix: {
      j["kind"] = "matrix";
      j["rows"] = obj.first;
      j["cols"] = obj.second;
      Json rows = Json::array();
      for (Index i = 0; i < obj.data.rows(); ++i) rows.push_back(vector_to_json(obj.data.row(i).transpose()));
      j["entries"] = rows;
      break;
    }
  }
  return j;
}

Json command_to_json(const Command& c) {
  Json j = Json::object();
  j["op"] = c.op;
  Json args = Json::object();
  for (const auto& [k, v] : c.args) args[k] = v;
  j["args"] = args;
  if (!c.params.empty()) {
    Json params = Json::object();
    for (const auto& [k, v] : c.params) params[k] = v;
    j["params"] = params;
  }
  if (c.output) j["output"] = *c.output;
  if (!c.expect.is_null()) j["expect"] = c.expect;
  if (!c.expect_distinct.is_null()) j["expect_distinct"] = c.expect_distinct;
  if (!c.expect_fields.is_null()) j["expect_fields"] = c.expect_fields;
  if (c.expect_error) j["expect_error"] = *c.expect_error;
  if (c.tol) j["tol"] = *c.tol;
  if (c.min_gap) j["min_gap"] = *c.min_gap;
  return j;
}

// ---------------------------------------------------------------------------------------------
// Execution

struct Result {
  std::optional<Relation> relation;
  Json fields = Json::object();
  std::optional<Value> stored;
};

class Executor {
 public:
  Executor(const Instance& inst, Tolerance tol) : inst_(inst), tol_(tol) {
    for (const auto& [name, obj] : inst.objects) env_.emplace(name, materialize(obj));
  }

  Json run_command(std::size_t index, const Command& c, Status& status, bool timing);

 private:
  Value materialize(const InstanceObject& obj) const {
    switch (obj.kind) {
      case InstanceObject::Kind::relation: {
        const Index p = inst_.dims.at(obj.first);
        const Index q = inst_.dims.at(obj.second);
        return Relation(p, q, Subspace::from_columns(obj.data, tol_, 0.0));
      }
      case InstanceObject::Kind::subspace:
        return Subspace::from_columns(obj.data, tol_, 0.0);
      case InstanceObject::Kind::matrix:
        return obj.data;
    }
    throw InternalInconsistency("unreachable object kind");
  }

  const Value& lookup(const Command& c, const std::string& arg) const {
    const std::string& name = c.args.at(arg);
    const auto it = env_.find(name);
    if (it == env_.end()) throw InputError("object \"" + name + "\" is not available (its producing command failed)");
    return it->second;
  }
  const Relation& rel(const Command& c, const std::string& arg) const {
    const Value& v = lookup(c, arg);
    if (!std::holds_alternative<Relation>(v)) throw InputError("argument \"" + arg + "\" of " + c.op + " must be a relation");
    return std::get<Relation>(v);
  }
  const Matrix& mat(const Command& c, const std::string& arg) const {
    const Value& v = lookup(c, arg);
    if (!std::holds_alternative<Matrix>(v)) throw InputError("argument \"" + arg + "\" of " + c.op + " must be a matrix");
    return std::get<Matrix>(v);
  }
  const Subspace& sub(const Command& c, const std::string& arg) const {
    const Value& v = lookup(c, arg);
    if (!std::holds_alternative<Subspace>(v)) throw InputError("argument \"" + arg + "\" of " + c.op + " must be a subspace");
    return std::get<Subspace>(v);
  }

  Relation expected_relation(const Json& j, const std::string& what) const {
    if (j.is_string()) {
      const auto it = env_.find(j.get<std::string>());
      if (it == env_.end() || !std::holds_alternative<Relation>(it->second)) {
        throw InputError(what + ": \"" + j.get<std::string>() + "\" is not an available relation");
      }
      return std::get<Relation>(it->second);
    }
    Instance scratch;
    scratch.dims = inst_.dims;
    const InstanceObject obj = parse_object(scratch, what, j, what);
    if (obj.kind != InstanceObject::Kind::relation) throw InputError(what + ": expected a relation");
    return std::get<Relation>(materialize(obj));
  }

  Result execute(const Command& c);

  const Instance& inst_;
  Tolerance tol_;
  std::map<std::string, Value> env_;
};

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "dimension_mismatch";
  if (dynamic_cast<const NotSectorial*>(&e)) return "not_sectorial";
  if (dynamic_cast<const NotMaximalSectorial*>(&e)) return "not_maximal_sectorial";
  if (dynamic_cast<const IllDefinedForm*>(&e)) return "ill_defined_form";
  if (dynamic_cast<const NotFactorizable*>(&e)) return "not_factorizable";
  if (dynamic_cast<const AssumptionNotMet*>(&e)) return "assumption_not_met";
  if (dynamic_cast<const UnsupportedSide*>(&e)) return "unsupported_side";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
  if (dynamic_cast<const InternalInconsistency*>(&e)) return "internal_inconsistency";
  if (dynamic_cast<const InputError*>(&e)) return "input";
  return "unknown";
}

Json sector_fields(const SectorReport& r, Index graph_dim) {
  Json f = Json::object();
  f["is_sectorial"] = r.is_sectorial;
  f["tan_min"] = double_to_json(r.tan_min);
  f["is_maximal"] = r.is_maximal;
  f["graph_dim"] = graph_dim;
  return f;
}

Result Executor::execute(const Command& c) {
  const Tolerance& tol = tol_;
  Result out;
  const std::string& op = c.op;
  const auto factorized = [&](Side side) { return factorize_product(rel(c, "t"), mat(c, "b"), side, tol); };
  const auto assembly = [&]() { return assemble(rel(c, "h1"), rel(c, "h2"), tol); };

  if (op == "adjoint") {
    out.relation = adjoint(rel(c, "r"));
  } else if (op == "inverse") {
    out.relation = inverse(rel(c, "r"));
  } else if (op == "compose") {
    out.relation = compose(rel(c, "r2"), rel(c, "r1"), tol);
  } else if (op == "operator_sum") {
    out.relation = operator_sum(rel(c, "r1"), rel(c, "r2"), tol);
  } else if (op == "operator_part") {
    out.relation = operator_part(rel(c, "r"), tol);
  } else if (op == "restrict") {
    out.relation = restrict(rel(c, "r"), sub(c, "l"), tol);
  } else if (op == "parts") {
    const RelationParts p = parts(rel(c, "r"), tol);
    out.fields["dom"] = subspace_to_json(p.dom);
    out.fields["ran"] = subspace_to_json(p.ran);
    out.fields["ker"] = subspace_to_json(p.ker);
    out.fields["mul"] = subspace_to_json(p.mul);
    out.fields["dim_dom"] = p.dom.dim();
    out.fields["dim_ran"] = p.ran.dim();
    out.fields["dim_ker"] = p.ker.dim();
    out.fields["dim_mul"] = p.mul.dim();
  } else if (op == "gap") {
    out.fields["gap"] = gap(rel(c, "a"), rel(c, "b"));
  } else if (op == "analyze") {
    const Relation& r = rel(c, "r");
    out.fields = sector_fields(sectoriality(r, tol), r.graph().dim());
  } else if (op == "sqrt_nonneg") {
    out.relation = sqrt_nonneg(rel(c, "a"), tol);
  } else if (op == "decompose") {
    const Relation& h = rel(c, "h");
    const MaxSectorialDecomposition d = decompose_maximal(h, tol);
    out.relation = d.real_part;
    const Matrix p = join(kernel(d.real_part, tol), multivalued_part(d.real_part, tol), tol).projector();
    out.fields["norm_b"] = spectral_norm(d.b);
    out.fields["tan_min"] = double_to_json(sectoriality(h, tol).tan_min);
    out.fields["recompose_gap"] = gap(recompose(d, tol), h);
    out.fields["b_null_residual"] = (d.b * p).norm();
  } else if (op == "friedrichs_oracle") {
    out.relation = friedrichs_oracle(rel(c, "s"), tol);
  } else if (op == "krein_oracle") {
    out.relation = krein_oracle(rel(c, "s"), tol);
  } else if (op == "extremal_oracle") {
    const ExtensionVerdict v = extremal_oracle(rel(c, "h"), rel(c, "s"), tol);
    out.fields["extends"] = v.extends;
    out.fields["maximal"] = v.maximal;
    out.fields["extremal"] = v.extremal;
    out.fields["witness_gap"] = v.witness_gap;
  } else if (op == "extension_family") {
    out.relation = extension_family_general(rel(c, "s"), sub(c, "l"), tol);
  } else if (op == "oracle_order") {
    const Relation& s = rel(c, "s");
    const SesquiForm tf = form_of(friedrichs_oracle(s, tol), tol);
    const SesquiForm tk = form_of(krein_oracle(s, tol), tol);
    const bool inside = tk.domain.contains(tf.domain, tol);
    double min_eig = 0.0;
    if (inside && tf.domain.dim() > 0) {
      const Matrix diff = hermitian_part(tf.matrix - restrict_form(tk, tf.domain, tol.gap_eq).matrix);
      min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(diff).eigenvalues().minCoeff();
    }
    out.fields["domain_inclusion"] = inside;
    out.fields["min_eigenvalue"] = min_eig;
    out.fields["oracle_gap"] = gap(relation_of_form(tf, tol), relation_of_form(tk, tol));
  } else if (op == "factorize") {
    const auto side = c.params.count("side") && c.params.at("side") == "right" ? Side::right : Side::left;
    out.relation = factorized(side).s;
  } else if (op == "factorized_identities") {
    const FactorizedSectorial f = factorized(Side::left);
    const SectorReport r = sectoriality(f.s, tol);
    const Relation t_adj = adjoint(f.t);
    out.fields["mul_gap"] = gap(multivalued_part(f.s, tol), multivalued_part(t_adj, tol));
    out.fields["ker_gap"] = gap(kernel(f.s, tol), kernel(f.t, tol));
    out.fields["alpha_nullity"] = alpha_nullity(f, tol);
    double zwei = 0.0;
    const Matrix& g = f.s.graph().basis();
    const Index n = f.s.dim_from();
    for (Index k = 0; k < g.cols(); ++k) {
      const Vector phi = g.col(k).head(n);
      const Vector phi_prime = g.col(k).tail(n);
      const Vector alpha = lemma_alpha(f, phi, phi_prime, tol);
      const Complex lhs = phi.dot(phi_prime);
      const Complex rhs = alpha.dot(one_plus_i(f.b) * alpha);
      zwei = std::max(zwei, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    out.fields["zwei_residual"] = zwei;
    out.fields["tan_min"] = double_to_json(r.tan_min);
    out.fields["norm_b"] = spectral_norm(f.b);
    out.fields["is_maximal"] = r.is_maximal;
    out.fields["adjoint_gap"] = gap(adjoint(f.s), factorize_product(f.t, -f.b, Side::left, tol).s);
    out.relation = f.s;
  } else if (op == "friedrichs_factorized") {
    out.relation = friedrichs_factorized(factorized(Side::left), tol);
  } else if (op == "krein_factorized") {
    out.relation = krein_factorized(factorized(Side::left), tol);
  } else if (op == "extremal_factorized") {
    out.relation = extremal_factorized(factorized(Side::left), sub(c, "l"), tol);
  } else if (op == "abstract_model") {
    const AbstractModel m = abstract_model(factorized(Side::left), tol);
    out.fields["ran_dim"] = m.ran_s.dim();
    out.fields["r0_dim"] = m.r0.dim();
    out.fields["quotient_dim"] = m.quotient.dim();
    out.fields["isometry_residual"] = m.isometry_residual;
    out.fields["compression_residual"] = m.compression_residual;
  } else if (op == "recover") {
    const auto mode = c.params.count("mode") && c.params.at("mode") == "krein" ? RecoveryMode::krein : RecoveryMode::friedrichs;
    const FactorizedSectorial f = recover_factorization(rel(c, "s"), mode, tol);
    out.relation = f.s;
    out.fields["side"] = to_string(f.side);
    out.fields["t"] = relation_to_json(f.t);
    out.fields["norm_b"] = spectral_norm(f.b);
  } else if (op == "assemble") {
    const SumAssembly sa = assembly();
    out.fields["gap_e_d"] = gap(sa.e, sa.d);
    out.fields["gap_e_f"] = gap(sa.e, sa.f);
    out.fields["e_eq_d"] = gap(sa.e, sa.d) <= tol.gap_eq;
    out.fields["e_eq_f"] = gap(sa.e, sa.f) <= tol.gap_eq;
    out.fields["e"] = subspace_to_json(sa.e);
    out.fields["d"] = subspace_to_json(sa.d);
    out.relation = sa.sum;
  } else if (op == "friedrichs_sum") {
    out.relation = friedrichs_sum(assembly(), tol);
  } else if (op == "krein_sum") {
    const KreinSum k = krein_sum(assembly(), tol);
    out.relation = k.relation;
    out.fields["form_emitted"] = k.form.has_value();
  } else if (op == "formsum") {
    out.relation = formsum_extension(assembly(), tol);
  } else if (op == "extremal_sum") {
    out.relation = extremal_sum_family(assembly(), sub(c, "l"), tol);
  } else if (op == "extremality_report") {
    const ExtremalityReport r = extremality_report(assembly(), tol);
    out.fields["e_eq_f"] = r.e_eq_f;
    out.fields["e_eq_d"] = r.e_eq_d;
    out.fields["formsum_extremal"] = r.formsum_extremal;
    out.fields["equivalence_holds"] = r.equivalence_holds;
    out.fields["e_eq_f_forced"] = r.e_eq_f_forced;
  } else {
    throw InputError("unknown op \"" + op + "\"");
  }
  if (out.relation) out.stored = *out.relation;
  return out;
}

bool field_matches(const Json& expected, const Json& actual, std::string& why) {
  if (expected.is_boolean() || expected.is_string()) {
    if (expected == actual) return true;
    why = "expected " + expected.dump() + ", got " + actual.dump();
    return false;
  }
  if (!actual.is_number()) {
    why = "expected a number, got " + actual.dump();
    return false;
  }
  const double a = actual.get<double>();
  if (expected.is_number()) {
    const double e = expected.get<double>();
    if (std::abs(a - e) <= kFieldRel * std::max(1.0, std::abs(e))) return true;
    why = "expected " + expected.dump() + ", got " + actual.dump();
    return false;
  }
  if (expected.is_object()) {
    if (expected.contains("max") && !(a <= expected["max"].get<double>())) {
      why = actual.dump() + " exceeds max " + expected["max"].dump();
      return false;
    }
    if (expected.contains("min") && !(a >= expected["min"].get<double>())) {
      why = actual.dump() + " is below min " + expected["min"].dump();
      return false;
    }
    return true;
  }
  why = "unsupported expectation " + expected.dump();
  return false;
}

Json Executor::run_command(std::size_t index, const Command& c, Status& status, bool timing) {
  Json rep = Json::object();
  rep["index"] = index;
  rep["op"] = c.op;
  const auto started = std::chrono::steady_clock::now();
  std::vector<std::string> failures;
  bool errored = false;
  try {
    Result r = execute(c);
    if (c.expect_error) {
      failures.push_back("expected error " + *c.expect_error + " but the op succeeded");
    }
    if (r.relation) rep["result"] = relation_to_json(*r.relation);
    if (!r.fields.empty()) rep["fields"] = r.fields;
    if (c.output && r.stored) env_.insert_or_assign(*c.output, *r.stored);
    const double eq = c.tol.value_or(tol_.gap_eq);
    if (!c.expect.is_null()) {
      if (!r.relation) throw InputError("op " + c.op + " has no relation result to compare with \"expect\"");
      const Relation expected = expected_relation(c.expect, "commands[" + std::to_string(index) + "].expect");
      const double g = gap(*r.relation, expected);
      rep["gap"] = g;
      rep["fingerprints"] = {{"computed", fingerprint(*r.relation)}, {"expected", fingerprint(expected)}};
      if (g > eq) failures.push_back("gap " + std::to_string(g) + " against expectation exceeds " + std::to_string(eq));
    }
    if (!c.expect_distinct.is_null()) {
      if (!r.relation) throw InputError("op " + c.op + " has no relation result to compare with \"expect_distinct\"");
      const Relation other = expected_relation(c.expect_distinct, "commands[" + std::to_string(index) + "].expect_distinct");
      const double g = gap(*r.relation, other);
      const double need = c.min_gap.value_or(kDefaultMinGap);
      rep["distinct_gap"] = g;
      rep["distinct_fingerprints"] = {{"computed", fingerprint(*r.relation)}, {"other", fingerprint(other)}};
      if (!(g > need)) failures.push_back("gap " + std::to_string(g) + " is not above " + std::to_string(need));
    }
    if (!c.expect_fields.is_null()) {
      for (const auto& [key, expected] : c.expect_fields.items()) {
        std::string why;
        if (!r.fields.contains(key)) {
          failures.push_back("no field \"" + key + "\"");
        } else if (!field_matches(expected, r.fields[key], why)) {
          failures.push_back(key + ": " + why);
        }
      }
    }
  } catch (const InternalInconsistency& e) {
    failures.push_back(std::string("internal inconsistency: ") + e.what());
    rep["error_kind"] = "internal_inconsistency";
  } catch (const Error& e) {
    const std::string kind = error_kind(e);
    rep["error_kind"] = kind;
    if (c.expect_error && *c.expect_error == kind) {
      rep["message"] = e.what();
    } else if (c.expect_error) {
      failures.push_back("expected error " + *c.expect_error + ", got " + kind + ": " + e.what());
    } else {
      errored = true;
      rep["message"] = e.what();
    }
  }
  Status s = Status::pass;
  if (errored) {
    s = Status::error;
  } else if (!failures.empty()) {
    s = Status::fail;
    std::string msg;
    for (const auto& f : failures) msg += (msg.empty() ? "" : "; ") + f;
    rep["message"] = msg;
  }
  rep["status"] = to_string(s);
  if (timing) {
    rep["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  status = std::max(status, s);
  return rep;
}

Tolerance effective_tolerance(const Instance& inst, const RunOptions& opts) {
  Tolerance tol = inst.tolerance.value_or(Tolerance{});
  if (opts.tol_gap) tol.gap_eq = *opts.tol_gap;
  if (opts.tol_rank) tol.rank_rel = *opts.tol_rank;
  tol.validate();
  return tol;
}

Json tolerance_json(const Tolerance& tol) { return {{"rank_rel", tol.rank_rel}, {"gap_eq", tol.gap_eq}}; }

RunOutcome input_error(const std::string& source, const std::exception& e) {
  RunOutcome out;
  out.status = Status::error;
  out.report = Json::object();
  out.report["instance"] = source;
  out.report["status"] = to_string(Status::error);
  out.report["error_kind"] = error_kind(e);
  out.report["message"] = e.what();
  return out;
}

// ---------------------------------------------------------------------------------------------
// Random instances

InstanceObject relation_object(const Relation& r, const std::string& from, const std::string& to) {
  return {InstanceObject::Kind::relation, from, to, r.graph().basis()};
}

Command cmd(std::string op, std::map<std::string, std::string> args) {
  Command c;
  c.op = std::move(op);
  c.args = std::move(args);
  return c;
}

Command with_output(Command c, std::string out) {
  c.output = std::move(out);
  return c;
}

Command expecting(Command c, std::string name) {
  c.expect = name;
  return c;
}

Command with_fields(Command c, Json fields) {
  c.expect_fields = std::move(fields);
  return c;
}

Relation random_restriction(Random& rng, const Relation& h) {
  const Subspace dom = domain(h);
  if (dom.dim() == 0) return h;
  const Subspace l = image(dom.basis(), rng.subspace(dom.dim(), rng.uniform_int(0, dom.dim() - 1)));
  return restrict(h, l);
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Public API

Json complex_to_json(Complex z) { return Json::array({snap(z.real()), snap(z.imag())}); }

Json relation_to_json(const Relation& r) {
  Json j = Json::object();
  j["from"] = r.dim_from();
  j["to"] = r.dim_to();
  j["graph_dim"] = r.graph().dim();
  const Matrix g = echelon(r.graph().basis());
  Json gens = Json::array();
  for (Index k = 0; k < g.cols(); ++k) {
    gens.push_back(Json::array({vector_to_json(g.col(k).head(r.dim_from())), vector_to_json(g.col(k).tail(r.dim_to()))}));
  }
  j["generators"] = gens;
  j["fingerprint"] = fingerprint(r);
  return j;
}

Json subspace_to_json(const Subspace& s) {
  Json j = Json::object();
  j["ambient_dim"] = s.ambient_dim();
  j["dim"] = s.dim();
  const Matrix g = echelon(s.basis());
  Json gens = Json::array();
  for (Index k = 0; k < g.cols(); ++k) gens.push_back(vector_to_json(g.col(k)));
  j["generators"] = gens;
  return j;
}

std::string fingerprint(const Relation& r) {
  // FNV-1a over the projector onto the graph, on a 1e-8 grid.
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&h](std::int64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= static_cast<std::uint64_t>(v >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(r.dim_from());
  mix(r.dim_to());
  mix(r.graph().dim());
  const Matrix p = r.graph().projector();
  for (Index j = 0; j < p.cols(); ++j) {
    for (Index i = 0; i < p.rows(); ++i) {
      mix(static_cast<std::int64_t>(std::llround(p(i, j).real() * 1e8)));
      mix(static_cast<std::int64_t>(std::llround(p(i, j).imag() * 1e8)));
    }
  }
  return std::to_string(r.dim_from()) + "x" + std::to_string(r.dim_to()) + ":" + std::to_string(r.graph().dim()) + ":" + hex64(h);
}

const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::error:
      return "error";
  }
  return "error";
}

int exit_code(Status s) { return static_cast<int>(s); }

namespace {
Instance parse_document(const Json& doc, const std::string& source);
}  // namespace

Instance parse_instance(const std::string& text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
  try {
    return parse_document(doc, source);
  } catch (const DimensionMismatch& e) {
    throw DimensionMismatch(source + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

namespace {

Instance parse_document(const Json& doc, const std::string& source) {
  Instance inst;
  const std::string root = "$";
  if (!doc.is_object()) bad(root, "expected a JSON object");
  inst.name = doc.contains("name") ? get_string(doc["name"], root + ".name") : source;
  const Json& dims = member(doc, "dims", root);
  if (!dims.is_object()) bad(root + ".dims", "expected an object");
  for (const auto& [name, value] : dims.items()) {
    if (!value.is_number_integer() || value.get<long long>() < 1 || value.get<long long>() > 32) {
      bad(root + ".dims." + name, "expected an integer between 1 and 32");
    }
    inst.dims[name] = value.get<Index>();
  }
  if (doc.contains("tolerance")) {
    const Json& t = doc["tolerance"];
    Tolerance tol;
    if (!t.is_object()) bad(root + ".tolerance", "expected an object");
    if (t.contains("rank_rel")) tol.rank_rel = t["rank_rel"].get<double>();
    if (t.contains("gap_eq")) tol.gap_eq = t["gap_eq"].get<double>();
    if (!(tol.rank_rel > 0.0) || !(tol.gap_eq > 0.0)) bad(root + ".tolerance", "tolerances must be positive");
    inst.tolerance = tol;
  }
  std::set<std::string> defined;
  if (doc.contains("objects")) {
    const Json& objs = doc["objects"];
    if (!objs.is_object()) bad(root + ".objects", "expected an object");
    for (const auto& [name, value] : objs.items()) {
      inst.objects.emplace(name, parse_object(inst, name, value, root + ".objects." + name));
      defined.insert(name);
    }
  }
  if (doc.contains("commands")) {
    const Json& cmds = doc["commands"];
    if (!cmds.is_array()) bad(root + ".commands", "expected an array");
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      inst.commands.push_back(parse_command(cmds[i], root + ".commands[" + std::to_string(i) + "]", defined));
    }
  }
  if (doc.contains("meta")) inst.meta = doc["meta"];
  return inst;
}

}  // namespace

Json serialize_instance(const Instance& inst) {
  Json j = Json::object();
  j["name"] = inst.name;
  Json dims = Json::object();
  for (const auto& [k, v] : inst.dims) dims[k] = v;
  j["dims"] = dims;
  if (inst.tolerance) j["tolerance"] = tolerance_json(*inst.tolerance);
  Json objs = Json::object();
  for (const auto& [name, obj] : inst.objects) {
    const Index split = obj.kind == InstanceObject::Kind::relation ? inst.dims.at(obj.first) : 0;
    objs[name] = object_to_json(obj, split);
  }
  j["objects"] = objs;
  Json cmds = Json::array();
  for (const Command& c : inst.commands) cmds.push_back(command_to_json(c));
  j["commands"] = cmds;
  if (!inst.meta.is_null()) j["meta"] = inst.meta;
  return j;
}

RunOutcome run_instance(const Instance& inst, const RunOptions& opts) {
  RunOutcome out;
  Tolerance tol;
  try {
    tol = effective_tolerance(inst, opts);
  } catch (const Error& e) {
    return input_error(inst.name, e);
  }
  out.report = Json::object();
  out.report["instance"] = inst.name;
  out.report["tolerance"] = tolerance_json(tol);
  Json cmds = Json::array();
  try {
    Executor ex(inst, tol);
    for (std::size_t i = 0; i < inst.commands.size(); ++i) cmds.push_back(ex.run_command(i, inst.commands[i], out.status, opts.timing));
  } catch (const Error& e) {
    return input_error(inst.name, e);
  }
  out.report["commands"] = cmds;
  out.report["status"] = to_string(out.status);
  return out;
}

RunOutcome run_text(const std::string& text, const std::string& source, const RunOptions& opts) {
  try {
    return run_instance(parse_instance(text, source), opts);
  } catch (const Error& e) {
    return input_error(source, e);
  }
}

RunOutcome run_file(const std::string& path, const RunOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return input_error(path, InputError(path + ": cannot open file"));
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_text(buf.str(), path, opts);
}

RunOutcome verify_files(const std::vector<std::string>& paths, const RunOptions& opts, unsigned jobs) {
  std::vector<RunOutcome> results(paths.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(paths.size(), 1)));
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < paths.size(); i = next++) results[i] = run_file(paths[i], opts);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t + 1 < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  RunOutcome merged;
  merged.report = Json::object();
  Json reports = Json::array();
  for (const RunOutcome& r : results) {
    merged.status = std::max(merged.status, r.status);
    reports.push_back(r.report);
  }
  merged.report["status"] = to_string(merged.status);
  merged.report["reports"] = reports;
  return merged;
}

const std::vector<std::string>& profiles() {
  static const std::vector<std::string> names = {"factorized-left", "maximal-pair", "general-sectorial", "nonnegative-symmetric"};
  return names;
}

Instance gen_random(std::uint64_t seed, Index n, const std::string& profile) {
  if (n < 1 || n > 32) throw InputError("gen_random: n must be between 1 and 32");
  if (std::find(profiles().begin(), profiles().end(), profile) == profiles().end()) {
    throw InputError("gen_random: unknown profile \"" + profile + "\"");
  }
  Instance inst;
  inst.name = profile + "-n" + std::to_string(n) + "-seed" + std::to_string(seed);
  inst.dims["H"] = n;
  inst.meta = Json::object();
  inst.meta["profile"] = profile;
  inst.meta["seed"] = seed;
  inst.meta["n"] = n;

  if (profile == "factorized-left") {
    Random rng(seed);
    const Index k = rng.uniform_int(1, n);
    inst.dims["K"] = k;
    const Relation t = rng.relation(n, k);
    Matrix b = rng.hermitian(k);
    const double norm = spectral_norm(b);
    const double target = 2.0 * std::abs(std::sin(rng.normal()));
    if (norm > 0.0) b *= target / norm;
    b = hermitian_part(b);
    inst.objects["T"] = relation_object(t, "H", "K");
    inst.objects["B"] = {InstanceObject::Kind::matrix, "K", "K", b};
    const std::map<std::string, std::string> tb = {{"t", "T"}, {"b", "B"}};
    inst.commands.push_back(with_output(cmd("factorize", tb), "S"));
    inst.commands.push_back(with_fields(cmd("factorized_identities", tb),
                                        {{"mul_gap", {{"max", 1e-8}}},
                                         {"ker_gap", {{"max", 1e-8}}},
                                         {"alpha_nullity", 0},
                                         {"zwei_residual", {{"max", 1e-8}}},
                                         {"is_maximal", true},
                                         {"adjoint_gap", {{"max", 1e-8}}}}));
    inst.commands.push_back(expecting(cmd("friedrichs_factorized", tb), "S"));
    inst.commands.push_back(expecting(cmd("krein_factorized", tb), "S"));
    inst.commands.push_back(expecting(cmd("friedrichs_oracle", {{"s", "S"}}), "S"));
    inst.commands.push_back(expecting(cmd("krein_oracle", {{"s", "S"}}), "S"));
    inst.commands.push_back(with_fields(cmd("abstract_model", tb), {{"isometry_residual", {{"max", 1e-10}}},
                                                                   {"compression_residual", {{"max", 1e-9}}}}));
    for (auto& c : inst.commands) {
      if (c.op != "factorize" && c.op != "factorized_identities" && c.op != "abstract_model") c.tol = 1e-8;
    }
  } else if (profile == "maximal-pair") {
    Random rng(seed);
    const bool real = rng.coin(0.3);
    inst.meta["real"] = real;
    inst.objects["H1"] = relation_object(rng.maximal_sectorial(n, real), "H", "H");
    inst.objects["H2"] = relation_object(rng.maximal_sectorial(n, real), "H", "H");
    const std::map<std::string, std::string> hh = {{"h1", "H1"}, {"h2", "H2"}};
    inst.commands.push_back(with_output(cmd("operator_sum", {{"r1", "H1"}, {"r2", "H2"}}), "SUM"));
    inst.commands.push_back(with_fields(cmd("analyze", {{"r", "SUM"}}), {{"is_maximal", true}}));
    inst.commands.push_back(with_fields(cmd("assemble", hh), {{"e_eq_f", true}}));
    inst.commands.push_back(expecting(cmd("friedrichs_sum", hh), "SUM"));
    inst.commands.push_back(expecting(cmd("krein_sum", hh), "SUM"));
    inst.commands.push_back(expecting(cmd("formsum", hh), "SUM"));
    inst.commands.push_back(with_fields(cmd("extremality_report", hh), {{"equivalence_holds", true}, {"e_eq_f", true}}));
    for (auto& c : inst.commands) {
      if (!c.expect.is_null()) c.tol = 1e-8;
    }
  } else {
    const bool real = profile == "nonnegative-symmetric";
    // Regenerate with the next seed until the two oracles differ.
    std::uint64_t used = seed;
    Relation s(n, n, Subspace(2 * n));
    for (int attempt = 0; attempt < 1000; ++attempt, ++used) {
      Random rng(used);
      s = random_restriction(rng, rng.maximal_sectorial(n, real));
      if (!is_sectorial(s)) continue;
      if (gap(friedrichs_oracle(s), krein_oracle(s)) > kDefaultMinGap) break;
    }
    inst.meta["seed_used"] = used;
    inst.objects["S"] = relation_object(s, "H", "H");
    const std::map<std::string, std::string> ss = {{"s", "S"}};
    inst.commands.push_back(with_fields(cmd("analyze", {{"r", "S"}}), {{"is_sectorial", true}, {"is_maximal", false}}));
    inst.commands.push_back(with_output(cmd("friedrichs_oracle", ss), "SF"));
    Command k = with_output(cmd("krein_oracle", ss), "SK");
    k.expect_distinct = "SF";
    inst.commands.push_back(k);
    inst.commands.push_back(with_fields(cmd("extremal_oracle", {{"h", "SF"}, {"s", "S"}}), {{"extremal", true}}));
    inst.commands.push_back(with_fields(cmd("extremal_oracle", {{"h", "SK"}, {"s", "S"}}), {{"extremal", true}}));
    if (real) {
      inst.commands.push_back(
          with_fields(cmd("oracle_order", ss), {{"domain_inclusion", true}, {"min_eigenvalue", {{"min", -1e-9}}}}));
    }
    Command rf = cmd("recover", ss);
    rf.params["mode"] = "friedrichs";
    rf.expect_error = "not_factorizable";
    // A proper restriction of a maximal relation has mul S* = (dom S)^perp larger than mul S.
    if (gap(multivalued_part(s), multivalued_part(adjoint(s))) > Tolerance{}.gap_eq) inst.commands.push_back(rf);
  }
  // The written file must pass the same validation as a hand-written one.
  parse_instance(dump(serialize_instance(inst)), inst.name);
  return inst;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace relab

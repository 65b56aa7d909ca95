// relab: batch front-end for instance files.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relab/errors.hpp"
#include "relab/instance.hpp"

namespace {

struct Common {
  std::optional<double> tol_gap;
  std::optional<double> tol_rank;
  std::string json_out;
  bool timing = false;

  relab::RunOptions options() const { return {tol_gap, tol_rank, timing}; }
};

int emit(const relab::Json& j, const std::string& path) {
  const std::string text = relab::dump(j);
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "relab: cannot write " << path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

int finish(const relab::RunOutcome& r, const Common& c) {
  if (const int rc = emit(r.report, c.json_out); rc != 0) return rc;
  if (r.status == relab::Status::error && r.report.contains("message")) {
    std::cerr << "relab: " << r.report["message"].get<std::string>() << "\n";
  }
  return relab::exit_code(r.status);
}

// Loads `file` and replaces its command list with a single command.
relab::RunOutcome single(const std::string& file, relab::Command command, const Common& c) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    relab::RunOutcome out;
    out.status = relab::Status::error;
    out.report = {{"instance", file}, {"status", "error"}, {"message", file + ": cannot open file"}};
    return out;
  }
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    relab::Instance inst = relab::parse_instance(text, file);
    for (const auto& [arg, name] : command.args) {
      if (!inst.objects.count(name)) throw relab::InputError(file + ": no object named \"" + name + "\"");
    }
    inst.commands = {std::move(command)};
    return relab::run_instance(inst, c.options());
  } catch (const relab::Error& e) {
    relab::RunOutcome out;
    out.status = relab::Status::error;
    out.report = {{"instance", file}, {"status", "error"}, {"message", e.what()}};
    return out;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional sectorial relations: constructions and verification"};
  app.require_subcommand(1);
  Common common;
  const auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--tol-gap", common.tol_gap, "Gap threshold for subspace equality");
    sub->add_option("--tol-rank", common.tol_rank, "Relative singular-value cutoff");
    sub->add_option("--json-out", common.json_out, "Write the JSON report here instead of stdout");
    sub->add_flag("--timing", common.timing, "Record per-command wall time (reports become run-dependent)");
  };

  std::vector<std::string> files;
  auto* run = app.add_subcommand("run", "Run the commands of one or more instance files");
  run->add_option("files", files, "Instance files")->required();
  add_common(run);

  unsigned jobs = 0;
  auto* verify = app.add_subcommand("verify", "Run instance files in parallel and merge the reports");
  verify->add_option("files", files, "Instance files")->required();
  verify->add_option("-j,--jobs", jobs, "Worker threads (default: hardware concurrency)");
  add_common(verify);

  std::string file, object, kind = "friedrichs", subspace, h1 = "H1", h2 = "H2";
  auto* analyze = app.add_subcommand("analyze", "Sectoriality report for one relation of a file");
  analyze->add_option("file", file)->required();
  analyze->add_option("--object", object, "Relation name")->required();
  add_common(analyze);

  auto* extend = app.add_subcommand("extend", "Friedrichs, Krein or extremal extension of one relation");
  extend->add_option("file", file)->required();
  extend->add_option("--object", object, "Relation name")->required();
  extend->add_option("--kind", kind, "friedrichs | krein | extremal")->check(CLI::IsMember({"friedrichs", "krein", "extremal"}));
  extend->add_option("--subspace", subspace, "Subspace L (extremal only)");
  add_common(extend);

  auto* formsum = app.add_subcommand("formsum", "Extensions of H1 + H2 and the extremality report");
  formsum->add_option("file", file)->required();
  formsum->add_option("--h1", h1, "First relation name");
  formsum->add_option("--h2", h2, "Second relation name");
  add_common(formsum);

  std::uint64_t seed = 0;
  long long n = 3;
  std::string profile = "factorized-left";
  auto* gen = app.add_subcommand("gen", "Write a random instance");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("-n,--n", n, "Dimension of H (1..32)");
  gen->add_option("--profile", profile, "Instance profile")->check(CLI::IsMember(relab::profiles()));
  gen->add_option("--json-out", common.json_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (*run) {
    if (files.size() == 1) return finish(relab::run_file(files.front(), common.options()), common);
    return finish(relab::verify_files(files, common.options(), 1), common);
  }
  if (*verify) return finish(relab::verify_files(files, common.options(), jobs), common);
  if (*analyze) {
    relab::Command c;
    c.op = "analyze";
    c.args = {{"r", object}};
    return finish(single(file, c, common), common);
  }
  if (*extend) {
    relab::Command c;
    c.op = kind == "friedrichs" ? "friedrichs_oracle" : kind == "krein" ? "krein_oracle" : "extension_family";
    c.args = {{"s", object}};
    if (kind == "extremal") {
      if (subspace.empty()) {
        std::cerr << "relab: --kind extremal needs --subspace\n";
        return 2;
      }
      c.args["l"] = subspace;
    }
    return finish(single(file, c, common), common);
  }
  if (*formsum) {
    std::ifstream in(file, std::ios::binary);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
      relab::Instance inst = relab::parse_instance(text, file);
      for (const std::string& name : {h1, h2}) {
        if (!inst.objects.count(name)) throw relab::InputError(file + ": no object named \"" + name + "\"");
      }
      inst.commands.clear();
      for (const char* op : {"assemble", "friedrichs_sum", "krein_sum", "formsum", "extremality_report"}) {
        relab::Command c;
        c.op = op;
        c.args = {{"h1", h1}, {"h2", h2}};
        inst.commands.push_back(c);
      }
      return finish(relab::run_instance(inst, common.options()), common);
    } catch (const relab::Error& e) {
      std::cerr << "relab: " << e.what() << "\n";
      return 2;
    }
  }
  if (*gen) {
    try {
      return emit(relab::serialize_instance(relab::gen_random(seed, n, profile)), common.json_out);
    } catch (const relab::Error& e) {
      std::cerr << "relab: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}

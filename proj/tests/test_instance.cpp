#include <fstream>
#include <sstream>

#include "doctest.h"
#include "relab/errors.hpp"
#include "relab/instance.hpp"
#include "support.hpp"

using namespace relab;
using namespace relab::testing;

namespace {

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fixture(const std::string& name) { return std::string(RELAB_FIXTURES) + "/" + name; }

}  // namespace

TEST_CASE("fixtures pass") {
  for (const char* name : {"fx_a.json", "fx_d.json"}) {
    const RunOutcome r = run_file(fixture(name));
    CHECK_MESSAGE(r.status == Status::pass, dump(r.report));
  }
}

TEST_CASE("fx_a report flags the strict pair") {
  const RunOutcome r = run_file(fixture("fx_a.json"));
  const Json& cmds = r.report["commands"];
  CHECK(cmds[1]["gap"].get<double>() == 0.0);
  CHECK(cmds[2]["gap"].get<double>() == 0.0);
  CHECK(cmds[3]["fields"]["gap"].get<double>() == doctest::Approx(1.0));
  CHECK(cmds[7]["error_kind"] == "not_factorizable");
}

TEST_CASE("input errors") {
  const RunOutcome dim = run_file(fixture("bad_dim.json"));
  CHECK(dim.status == Status::error);
  CHECK(exit_code(dim.status) == 2);
  CHECK(dim.report["error_kind"] == "dimension_mismatch");
  CHECK(dim.report["message"].get<std::string>().find("'T'") != std::string::npos);

  const RunOutcome syn = run_file(fixture("bad_syntax.json"));
  CHECK(syn.status == Status::error);
  CHECK(syn.report["message"].get<std::string>().find("line 2, column") != std::string::npos);

  CHECK_THROWS_AS(parse_instance(R"({"dims": {"H": 1}, "commands": [{"op": "nope"}]})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"dims": {"H": 1}, "commands": [{"op": "adjoint", "args": {"r": "X"}}]})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"dims": {"H": 40}})"), InputError);
  CHECK(run_file("/nonexistent/file.json").status == Status::error);

  // Inner dimensions that only clash at run time are reported as input errors too.
  const char* clash = R"({"dims": {"H": 1, "K": 2},
    "objects": {"A": {"kind": "relation", "from": "H", "to": "H", "matrix": [[1]]},
                "B": {"kind": "relation", "from": "K", "to": "K", "matrix": [[1, 0], [0, 1]]}},
    "commands": [{"op": "compose", "args": {"r2": "B", "r1": "A"}}]})";
  const RunOutcome rc = run_text(clash, "clash");
  CHECK(rc.status == Status::error);
  CHECK(rc.report["commands"][0]["error_kind"] == "dimension_mismatch");
}

TEST_CASE("failed expectations carry gap and fingerprints") {
  const char* text = R"({"dims": {"H": 2},
    "objects": {"A": {"kind": "relation", "from": "H", "to": "H", "matrix": [[1, 0], [0, 1]]},
                "B": {"kind": "relation", "from": "H", "to": "H", "matrix": [[1, 0], [0, 2]]}},
    "commands": [{"op": "adjoint", "args": {"r": "A"}, "expect": "B"}]})";
  const RunOutcome r = run_text(text, "mismatch");
  CHECK(r.status == Status::fail);
  CHECK(exit_code(r.status) == 1);
  const Json& c = r.report["commands"][0];
  CHECK(c["status"] == "fail");
  CHECK(c["gap"].get<double>() > 0.1);
  CHECK(c["fingerprints"]["computed"] != c["fingerprints"]["expected"]);
}

TEST_CASE("serialization round trip") {
  for (const std::string& profile : profiles()) {
    const Instance inst = gen_random(5, 3, profile);
    const Json once = serialize_instance(inst);
    const Instance again = parse_instance(dump(once));
    CHECK(serialize_instance(again) == once);
    REQUIRE(again.objects.size() == inst.objects.size());
    for (const auto& [name, obj] : inst.objects) CHECK((again.objects.at(name).data - obj.data).norm() < 1e-13);
  }
  const Instance fx = parse_instance(read(fixture("fx_d.json")));
  CHECK(serialize_instance(parse_instance(dump(serialize_instance(fx)))) == serialize_instance(fx));
}

TEST_CASE("canonical generators") {
  const Relation r = make_relation(2, 2, {{vec({2.0, 0.0}), vec({4.0, Complex(0.0, 2.0)})}});
  const Json j = relation_to_json(r);
  REQUIRE(j["generators"].size() == 1);
  CHECK(j["generators"][0][0] == Json::parse("[[1.0, 0.0], [0.0, 0.0]]"));
  CHECK(j["generators"][0][1] == Json::parse("[[2.0, 0.0], [0.0, 1.0]]"));
  CHECK(fingerprint(r) == fingerprint(Relation(2, 2, Subspace::from_columns(r.graph().basis() * Complex(0.0, 3.0)))));
}

TEST_CASE("gen_random determinism and profiles") {
  CHECK(dump(serialize_instance(gen_random(7, 4, "maximal-pair"))) == dump(serialize_instance(gen_random(7, 4, "maximal-pair"))));
  CHECK(dump(serialize_instance(gen_random(7, 4, "maximal-pair"))) != dump(serialize_instance(gen_random(8, 4, "maximal-pair"))));
  CHECK_THROWS_AS(gen_random(1, 3, "bogus"), InputError);
  CHECK_THROWS_AS(gen_random(1, 33, "maximal-pair"), InputError);

  const Instance strict = gen_random(1, 2, "general-sectorial");
  CHECK(strict.meta.contains("seed_used"));
  const RunOutcome rs = run_instance(strict);
  CHECK_MESSAGE(rs.status == Status::pass, dump(rs.report));
  bool certified = false;
  for (const Json& c : rs.report["commands"]) {
    if (c.contains("distinct_gap")) certified = c["distinct_gap"].get<double>() > 0.1;
  }
  CHECK(certified);

  const RunOutcome rf = run_instance(gen_random(3, 3, "factorized-left"));
  CHECK_MESSAGE(rf.status == Status::pass, dump(rf.report));
}

TEST_CASE("reports are stable and batches merge in order") {
  const Instance inst = gen_random(2, 4, "factorized-left");
  CHECK(dump(run_instance(inst).report) == dump(run_instance(inst).report));
  const std::vector<std::string> files = {fixture("fx_d.json"), fixture("bad_dim.json"), fixture("fx_a.json")};
  const RunOutcome one = verify_files(files, {}, 1);
  const RunOutcome many = verify_files(files, {}, 3);
  CHECK(dump(one.report) == dump(many.report));
  CHECK(one.status == Status::error);
  CHECK(one.report["reports"][0]["instance"] == "fx_d");
  CHECK(one.report["reports"][2]["instance"] == "fx_a");
}

TEST_CASE("tolerance overrides") {
  const Instance inst = parse_instance(read(fixture("fx_a.json")));
  REQUIRE(inst.tolerance.has_value());
  CHECK(run_instance(inst).report["tolerance"]["gap_eq"].get<double>() == 1e-10);
  RunOptions opts;
  opts.tol_gap = 1e-7;
  CHECK(run_instance(inst, opts).report["tolerance"]["gap_eq"].get<double>() == 1e-7);
  opts.tol_gap = -1.0;
  CHECK(run_instance(inst, opts).status == Status::error);
}

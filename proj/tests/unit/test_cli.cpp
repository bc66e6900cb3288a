#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fourcurv/cli.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
  json doc() const { return json::parse(out); }
  json error() const { return json::parse(err)["error"]; }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fourcurv");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Run r;
  r.code = fourcurv::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

json schema(const std::string& name) {
  std::ifstream in(std::string(FOURCURV_SCHEMA_DIR) + "/" + name + ".schema.json");
  REQUIRE(in);
  return json::parse(in);
}

// Top-level shape only; full validation runs in the Python smoke tests.
void check_required(const json& doc, const json& sch) {
  for (const auto& key : sch["required"]) CHECK(doc.contains(key.get<std::string>()));
  const json& rep = sch["properties"]["report"];
  if (rep.contains("required"))
    for (const auto& key : rep["required"]) CHECK(doc["report"].contains(key.get<std::string>()));
}

}  // namespace

TEST_CASE("tensor commands") {
  const Run d = run({"decompose", "--model", "S4", "--timestamp", "t0"});
  REQUIRE(d.code == 0);
  const json doc = d.doc();
  check_required(doc, schema("decompose"));
  CHECK(doc["report"]["R"].get<double>() == doctest::Approx(12.0));
  CHECK(doc["manifest"]["tool"] == "fourcurv");
  CHECK(doc["manifest"]["command"] == "decompose");
  CHECK(doc["manifest"]["timestamp"] == "t0");

  const Run b = run({"berger", "--tensor", "CP2"});
  REQUIRE(b.code == 0);
  check_required(b.doc(), schema("berger"));
  CHECK(b.doc()["report"]["a"][2].get<double>() == doctest::Approx(4.0));

  const Run q = run({"quadratic", "--model", "S2axS2b", "--param", "a=1", "--param", "b=2"});
  REQUIRE(q.code == 0);
  check_required(q.doc(), schema("quadratic"));

  const Run c = run({"classify", "--model", "CP2", "--samples", "4", "--seed", "3"});
  REQUIRE(c.code == 0);
  check_required(c.doc(), schema("classify"));
  CHECK(c.doc()["manifest"]["config"]["samples"] == 4);

  const Run e = run({"decompose", "--tensor", R"({"kind":"synth_einstein","w_plus":[-2,-2,4],"w_minus":[0,0,0],"R":24})"});
  REQUIRE(e.code == 0);
  CHECK(e.doc()["report"]["Wplus"]["det"].get<double>() == doctest::Approx(16.0));
}

TEST_CASE("deterministic output") {
  const std::vector<std::string> args = {"classify", "--model", "CP2", "--timestamp", "fixed"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> v = {"verify", "--identity", "hamilton", "--chart", "s4", "--points", "2",
                                      "--timestamp", "fixed"};
  CHECK(run(v).out == run(v).out);

  setenv("SOURCE_DATE_EPOCH", "86400", 1);
  CHECK(run({"decompose", "--model", "S4"}).doc()["manifest"]["timestamp"] == "1970-01-02T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("errors exit with code 2 and a typed message") {
  const Run conflict = run({"decompose", "--tensor", R"({"kind":"components","entries":[[1,2,1,2,1],[2,1,2,1,2]]})"});
  CHECK(conflict.code == 2);
  check_required(json::parse(conflict.err), schema("error"));
  CHECK(conflict.error()["type"] == "ConflictingEntry");

  const Run bianchi = run({"decompose", "--tensor", R"({"kind":"components","entries":[[1,2,3,4,1]]})"});
  CHECK(bianchi.code == 2);
  CHECK(bianchi.error()["type"] == "SymmetryViolation");
  CHECK(bianchi.error()["identity"] == "first_bianchi");
  CHECK(bianchi.error()["index"].size() == 4);
  for (const auto& i : bianchi.error()["index"]) CHECK((i.get<int>() >= 1 && i.get<int>() <= 4));

  CHECK(run({"berger", "--model", "S2axS2b", "--param", "b=2"}).error()["type"] == "NotEinstein");
  CHECK(run({"decompose", "--model", "T4"}).error()["type"] == "BadSpec");
  CHECK(run({"decompose", "--tensor", "{oops"}).error()["type"] == "ParseError");
  CHECK(run({"frobnicate"}).error()["type"] == "UsageError");
  CHECK(run({}).code == 2);
  CHECK(run({"verify", "--identity", "nope", "--chart", "s4"}).code == 2);
  CHECK(run({"verify", "--identity", "hamilton", "--chart", "s2xs2", "--h", "-1"}).error()["type"] == "InvalidInput");
  CHECK(run({"verify", "--identity", "hamilton", "--chart", R"({"kind":"model","name":"S2axS2b","params":{"b":2}})"})
            .error()["type"] == "NotEinsteinChart");
  CHECK(run({"suite", "--only", "99"}).code == 2);
}

TEST_CASE("verify") {
  const Run r = run({"verify", "--identity", "weitzenbock-einstein", "--chart", "fs", "--points", "2"});
  REQUIRE(r.code == 0);
  const json doc = r.doc();
  check_required(doc, schema("verify"));
  CHECK(doc["report"]["summary"]["plus"]["converges"] == true);
  CHECK(doc["report"]["points"].size() == 2);
  CHECK(doc["report"]["nominal_order"] == 4);

  const Run s = run({"verify", "--identity", "lemma31", "--structure", "bump", "--points", "1", "--order", "2"});
  REQUIRE(s.code == 0);
  CHECK(s.doc()["report"]["summary"]["traced_corrected"]["converges"] == true);
  CHECK(s.doc()["report"]["summary"]["traced_printed"]["converges"] == false);

  const Run csv = run({"verify", "--identity", "hamilton", "--chart", "s4", "--points", "1", "--csv", "-"});
  REQUIRE(csv.code == 0);
  std::istringstream lines(csv.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "point,x1,x2,x3,x4,h,name,value");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 3);  // one residual at three levels

  const Run cgy = run({"verify", "--identity", "cgy", "--chart", "s4", "--points", "1"});
  CHECK(cgy.code == 0);
}

TEST_CASE("output file") {
  const std::string path = "cli_test_out.json";
  const Run r = run({"decompose", "--model", "CP2", "-o", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(json::parse(in)["report"]["R"].get<double>() == doctest::Approx(24.0));
  std::remove(path.c_str());
}

TEST_CASE("suite subset") {
  const Run r = run({"suite", "--only", "1", "2", "--json", "-", "--timestamp", "fixed"});
  CHECK(r.code == 0);
  const json doc = r.doc();
  check_required(doc, schema("suite"));
  CHECK(doc["report"]["criteria"].size() == 2);
  CHECK(r.err.find("PASS  criterion 1") != std::string::npos);
  // the jobs count must not change the document
  const Run j = run({"-j", "2", "suite", "--only", "1", "2", "--json", "-", "--timestamp", "fixed"});
  CHECK(j.out == r.out);
}

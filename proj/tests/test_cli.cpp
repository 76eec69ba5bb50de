#include <doctest.h>

#include <mixid/cli.hpp>
#include <mixid/io.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mixid;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mixid");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "mixid_cli_tests";
  fs::create_directories(dir);
  return (dir / name).string();
}

void write_text(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("cli: help and bad arguments") {
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"gen", "--help"}).out.find("--min-strong-sep") != std::string::npos);
  CHECK(run({}).code == kExitInvalidInput);
  CHECK(run({"bogus"}).code == kExitInvalidInput);
  CHECK(run({"gen", "--K", "2"}).code == kExitInvalidInput);
  CHECK(run({"sep", scratch("does_not_exist.json")}).code == kExitInvalidInput);
}

TEST_CASE("cli: counterexample pipeline") {
  const auto pair = scratch("pair.json");
  CHECK(run({"cx-build", "--K", "2", "--M", "2", "--L", "2", "--Lbar", "2", "-o", pair}).code == kExitOk);
  auto v = run({"cx-verify", pair});
  CHECK(v.code == kExitOk);
  auto report = io::json::parse(v.out);
  CHECK(report.at("all_passed") == true);
  for (auto& [name, ok] : report.at("checks").items()) CHECK_MESSAGE(ok == true, name);

  const auto spec = scratch("spec.json");
  write_text(spec, R"({"K": 2, "L": 3, "M": 3, "Lbar": 2, "alpha": "1/60", "beta": "1/60"})");
  auto built = run({"cx-build", spec});
  CHECK(built.code == kExitOk);
  CHECK(io::json::parse(built.out).at("spec").at("alpha") == "1/60");

  // out-of-range Lbar and infeasible scale are input errors
  CHECK(run({"cx-build", "--K", "2", "--M", "2", "--L", "3", "--Lbar", "3"}).code == kExitInvalidInput);
  CHECK(run({"cx-build", "--K", "2", "--M", "2", "--L", "2", "--Lbar", "2", "--alpha", "1/2"}).code ==
        kExitInvalidInput);
  CHECK(run({"cx-build", "--trivial", "--K", "2", "--M", "2", "--L", "2"}).code == kExitOk);
}

TEST_CASE("cli: tampered pair fails verification") {
  const auto pair = scratch("pair_tamper.json");
  REQUIRE(run({"cx-build", "--K", "2", "--M", "2", "--L", "2", "--Lbar", "2", "-o", pair}).code == kExitOk);
  auto j = io::read_json_file(pair);
  j["G"]["w"] = io::json::array({"1/2", "1/2"});
  write_text(pair, io::dump(j));
  CHECK(run({"cx-verify", pair}).code == kExitVerificationFailed);
}

TEST_CASE("cli: gen, sep, dist") {
  const auto model = scratch("gen.json");
  CHECK(run({"gen", "--K", "2", "--L", "4", "--M", "3", "--seed", "5", "--min-strong-sep", "3", "-o", model}).code ==
        kExitOk);
  auto sep = io::json::parse(run({"sep", model}).out);
  CHECK(sep.at("verdict") == "THM1_STRONG");
  CHECK(sep.at("L_s").get<int>() >= 3);

  // determinism: same argv, same bytes
  CHECK(run({"gen", "--K", "3", "--L", "3", "--M", "2", "--seed", "42"}).out ==
        run({"gen", "--K", "3", "--L", "3", "--M", "2", "--seed", "42"}).out);

  auto exact = io::json::parse(run({"dist", model, "--exact"}).out);
  CHECK(exact.at("exact") == true);
  CHECK(exact.at("values").size() == 81u);
  auto flt = io::json::parse(run({"dist", model}).out);
  CHECK(flt.at("exact") == false);

  const auto fmodel = scratch("float_model.json");
  write_text(fmodel, R"({"K":1,"L":1,"M":2,"mode":"interior","w":[1],"F":[[[0.25,0.75]]]})");
  CHECK(run({"dist", fmodel, "--exact"}).code == kExitInvalidInput);
  CHECK(run({"dist", fmodel}).code == kExitOk);
  CHECK(io::json::parse(run({"sep", fmodel}).out).at("verdict") == "THM1_STRONG");
}

TEST_CASE("cli: charpoly and compare") {
  const auto a = scratch("cp_a.json"), b = scratch("cp_b.json"), c = scratch("cp_c.json");
  REQUIRE(run({"gen", "--K", "2", "--L", "3", "--M", "2", "--seed", "8", "-o", a}).code == kExitOk);
  auto j = io::read_json_file(a);
  std::swap(j["F"][0], j["F"][1]);
  std::swap(j["w"][0], j["w"][1]);
  write_text(b, io::dump(j));
  auto cmp = run({"charpoly", "--compare", a, b});
  CHECK(cmp.code == kExitOk);
  CHECK(io::json::parse(cmp.out).at("identical") == true);

  REQUIRE(run({"gen", "--K", "2", "--L", "3", "--M", "2", "--seed", "9", "-o", c}).code == kExitOk);
  CHECK(run({"charpoly", "--compare", a, c}).code == kExitVerificationFailed);

  // tensor input gives the same polynomial
  const auto t = scratch("cp_t.json");
  REQUIRE(run({"dist", a, "--exact", "-o", t}).code == kExitOk);
  CHECK(run({"charpoly", t}).out == run({"charpoly", a}).out);
  CHECK(run({"charpoly", "--compare", a, t}).code == kExitOk);

  const auto m3 = scratch("cp_m3.json");
  REQUIRE(run({"gen", "--K", "2", "--L", "2", "--M", "3", "--seed", "1", "-o", m3}).code == kExitOk);
  CHECK(run({"charpoly", m3}).code == kExitInvalidInput);
}

TEST_CASE("cli: project") {
  const auto m = scratch("pj_m.json"), sel = scratch("pj_sel.json"), t = scratch("pj_t.json");
  REQUIRE(run({"gen", "--K", "2", "--L", "3", "--M", "3", "--seed", "4", "-o", m}).code == kExitOk);
  write_text(sel, "[2, 0, 1]");
  REQUIRE(run({"dist", m, "--exact", "-o", t}).code == kExitOk);
  auto via_params = run({"project", m, "--selector", sel});
  CHECK(via_params.code == kExitOk);
  const auto pm = scratch("pj_pm.json");
  write_text(pm, via_params.out);
  CHECK(run({"dist", pm, "--exact"}).out == run({"project", t, "--selector", sel}).out);

  write_text(sel, "[3, 0, 1]");
  CHECK(run({"project", m, "--selector", sel}).code == kExitInvalidInput);
}

TEST_CASE("cli: recover and probe") {
  const auto m = scratch("rc_m.json");
  REQUIRE(run({"gen", "--K", "2", "--L", "3", "--M", "2", "--seed", "12", "--min-strong-sep", "3", "-o", m}).code ==
        kExitOk);
  auto rec = run({"recover", m, "--starts", "4", "--seed", "1"});
  CHECK(rec.code == kExitOk);
  CHECK(io::json::parse(rec.out).at("solutions").size() == 4u);
  CHECK(rec.out == run({"recover", m, "--starts", "4", "--seed", "1"}).out);

  const auto t = scratch("rc_t.json");
  REQUIRE(run({"dist", m, "-o", t}).code == kExitOk);
  CHECK(run({"recover", t, "--starts", "2"}).code == kExitInvalidInput);  // K unknown
  CHECK(run({"recover", t, "--starts", "2", "--K", "2"}).code == kExitOk);

  auto probe = run({"probe", m, "--starts", "8", "--seed", "2"});
  CHECK(probe.code == kExitOk);
  CHECK(io::json::parse(probe.out).at("unique_orbit") == true);
}

TEST_CASE("cli: resource cap") {
  const auto m = scratch("cap.json");
  REQUIRE(run({"gen", "--K", "2", "--L", "21", "--M", "2", "--seed", "1", "-o", m}).code == kExitOk);
  CHECK(run({"dist", m}).code == kExitResourceCap);
}

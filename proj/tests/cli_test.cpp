#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "curvelab/cli.hpp"

using namespace curvelab;
using namespace curvelab::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  json out;
  std::string err;
};

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("curvelab-test-" + name);
  fs::remove_all(dir);
  return dir;
}

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "curvelab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  json parsed = out.str().empty() ? json() : json::parse(out.str());
  return {code, parsed, err.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config text") {
  RunConfig c;
  apply_config_text(R"(
# quadric run
surface = "quadric1", params = {a: -1, b: -1, c: 1}
form = II
domain = [-0.5, 0.5, -pi/4, pi/4]
at = 0.3, 0.2
count = 40   # samples
seed = 7
tau_pass = 1e-7
strategy = grid
out = "reports"
)",
                    c);
  CHECK(c.surface == "quadric1");
  CHECK(c.params.at("a") == -1.0);
  CHECK(c.params.at("c") == 1.0);
  CHECK(c.form == Form::II);
  REQUIRE(c.domain.has_value());
  CHECK(c.domain->v_min == doctest::Approx(-std::numbers::pi / 4));
  REQUIRE(c.at.has_value());
  CHECK(c.at->second == doctest::Approx(0.2));
  CHECK(c.count == 40);
  CHECK(c.seed == 7);
  CHECK(c.thresholds.tau_pass == 1e-7);
  CHECK(c.strategy == SamplingStrategy::grid);
  CHECK(c.out_dir == "reports");

  RunConfig bad;
  CHECK_THROWS_AS(apply_config_text("colour = red", bad), Error);
  CHECK_THROWS_AS(apply_config_text("count = many", bad), Error);
  CHECK_THROWS_AS(apply_config_text("at = 1", bad), Error);
}

TEST_CASE("output directory precedence") {
  ::unsetenv("CURVELAB_OUT");
  CHECK(resolve_out_dir(std::nullopt, "") == "curvelab-reports");
  CHECK(resolve_out_dir(std::nullopt, "file") == "file");
  ::setenv("CURVELAB_OUT", "env", 1);
  CHECK(resolve_out_dir(std::nullopt, "file") == "env");
  CHECK(resolve_out_dir(std::string("flag"), "file") == "flag");
  ::unsetenv("CURVELAB_OUT");
}

TEST_CASE("detect on the unit sphere") {
  const fs::path dir = scratch_dir("sphere");
  const Run r = run({"detect", "--surface", "sphere", "--r", "1", "--form", "II", "--out",
                     dir.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out["schema"] == "curvelab/1");
  CHECK(r.out["version"] == CURVELAB_VERSION_STRING);
  CHECK(r.out.contains("timestamp"));
  const json& res = r.out["result"];
  CHECK(res["verdict"] == "PASS");
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(res["lambda"][i][j].get<double>() == doctest::Approx(i == j ? -2.0 : 0.0).scale(1));
    }
  }
  CHECK(fs::exists(res["samples"].get<std::string>()));
  CHECK(r.out["config"]["surface"] == "sphere");
  CHECK(r.out["config"]["params"]["r"] == 1.0);
  CHECK(r.err.find("PASS") != std::string::npos);

  int json_files = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    json_files += entry.path().extension() == ".json";
  }
  CHECK(json_files == 1);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch_dir("codes");
  CHECK(run({"detect", "--surface", "quadric2", "--a", "1", "--b", "1", "--form", "II",
             "--out", dir.string()})
            .code == kExitFail);
  CHECK(run({"identities", "--surface", "helicoid", "--c", "1", "--grid", "64", "--out",
             dir.string()})
            .code == kExitOk);
  // A window between the thresholds forces INDETERMINATE.
  CHECK(run({"detect", "--surface", "quadric2", "--tau-pass", "1e-3", "--tau-fail", "10",
             "--out", dir.string()})
            .code == kExitIndeterminate);

  const Run unknown = run({"detect", "--surface", "klein", "--out", dir.string()});
  CHECK(unknown.code == kExitUsage);
  const json err = json::parse(unknown.err);
  CHECK(err["schema"] == "curvelab/1");
  CHECK(err["error"]["kind"] == "configuration");

  CHECK(run({"detect", "--bogus"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"detect", "--surface", "quadric2", "--a", "-1", "--out", dir.string()}).code ==
        kExitUsage);

  const Run outside = run({"forms", "--surface", "sphere", "--at", "0,1.5707963267948966",
                           "--out", dir.string()});
  CHECK(outside.code == kExitNumeric);
  CHECK(json::parse(outside.err)["error"]["kind"] == "domain");
  const Run flat = run({"laplacian", "--surface", "cylinder", "--form", "II", "--at", "0,0",
                        "--out", dir.string()});
  CHECK(flat.code == kExitNumeric);
}

TEST_CASE("reports are reproducible up to the timestamp") {
  const fs::path dir = scratch_dir("repro");
  auto body = [&] {
    Run r = run({"detect", "--surface", "quadric1", "--a", "2", "--b", "3", "--seed", "4",
                 "--out", dir.string(), "--format", "json"});
    r.out.erase("timestamp");
    return r.out.dump();
  };
  CHECK(body() == body());
}

TEST_CASE("flags override the config file") {
  const fs::path dir = scratch_dir("config");
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "surface = \"quadric2\", params = {a: 2, b: 3}\ncount = 30\n";
  const Run r = run({"detect", "--config", cfg.string(), "--count", "20", "--b", "1",
                     "--out", (dir / "out").string()});
  CHECK(r.out["config"]["surface"] == "quadric2");
  CHECK(r.out["config"]["count"] == 20);
  CHECK(r.out["config"]["params"]["a"] == 2.0);
  CHECK(r.out["config"]["params"]["b"] == 1.0);
  CHECK(r.out["result"]["sampling"]["count"] == 20);
}

TEST_CASE("other commands") {
  const fs::path dir = scratch_dir("commands");
  const Run cat = run({"catalog", "--out", dir.string()});
  CHECK(cat.code == kExitOk);
  CHECK(cat.out["result"]["surfaces"].size() == catalog().size());

  const Run forms = run({"forms", "--surface", "sphere", "--at", "0,0", "--out", dir.string()});
  CHECK(forms.code == kExitOk);
  for (const char* key : {"g", "b", "e", "ginv", "binv", "einv", "K", "H", "n", "Gamma", "Pi",
                          "LambdaSym", "T"}) {
    CHECK(forms.out["result"].contains(key));
  }
  CHECK(forms.out["result"]["b"][0][0].get<double>() == doctest::Approx(-1.0));

  const Run lap = run({"laplacian", "--surface", "helicoid", "--form", "II", "--field", "n",
                       "--at", "0,1", "--out", dir.string()});
  CHECK(lap.out["result"]["value"][0].get<double>() == doctest::Approx(-1.0));

  const Run grid = run({"laplacian", "--surface", "quadric2", "--form", "III", "--field", "u",
                        "--grid", "16", "--out", dir.string()});
  CHECK(grid.code == kExitOk);
  const std::string csv = grid.out["result"]["samples"];
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "u,v,lap");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 16);

  const Run xval = run({"xval", "--surface", "quadric2", "--grid", "100", "--out", dir.string()});
  CHECK(xval.code == kExitOk);
  CHECK(xval.out["result"]["operator_sign"] == 1);
  const Run ruled = run({"xval", "--surface", "helicoid", "--out", dir.string()});
  CHECK(ruled.code == kExitFail);
  CHECK(ruled.out["result"]["operator_sign"] == -1);

  const Run affine = run({"detect", "--surface", "catenoid", "--form", "I", "--target", "x",
                          "--out", dir.string(), "--format", "csv"});
  CHECK(affine.code == kExitOk);
  CHECK(affine.out["result"].contains("B"));

  const Run hel = run({"detect", "--surface", "helicoid", "--form", "II", "--out", dir.string()});
  CHECK(hel.out["result"].contains("gauss_map_identity"));
  CHECK(hel.out["result"]["discrepancy"] == (hel.out["result"]["verdict"] != "PASS"));
}

}  // TEST_SUITE

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rlab/csv.hpp"
#include "rlab/experiment.hpp"

using namespace rlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rlab_exp_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kSmallSim = R"(
[scenario]
name = simulate-linear
[grid]
n = 16
length = 8pi
[data]
shape = packet
width = 2
cutoff = 0.5
[potential]
V = 1, 0, 0, 2, 0.001
delta = 100
[evolve]
t_end = 1.5
dt = 0.1
stride = 5
)";

} // namespace

TEST_CASE("config parsing, canonical form and hash") {
  const auto c = ExperimentConfig::parse(kSmallSim);
  CHECK(c.scenario() == "simulate-linear");
  CHECK(c.get_int("grid.n") == 16);
  CHECK(c.get_double("grid.length") == doctest::Approx(8 * 3.141592653589793).epsilon(1e-15));
  CHECK(c.get_doubles("potential.V").size() == 5);
  CHECK(c.get_double("evolve.missing", 4.5) == 4.5);
  CHECK_THROWS_AS(c.get_double("evolve.missing"), ConfigError);

  const auto again = ExperimentConfig::parse(c.serialize());
  CHECK(again == c);
  CHECK(again.serialize() == c.serialize());
  CHECK(again.hash() == c.hash());
  CHECK(c.hash().size() == 64);

  auto changed = c;
  changed.set("run.seed", "2");
  CHECK(changed.hash() != c.hash());
}

TEST_CASE("config errors") {
  try {
    ExperimentConfig::parse("").validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string m = e.what();
    CHECK(m.find("scenario.name") != std::string::npos);
    CHECK(m.find("grid.n") != std::string::npos);
    CHECK(m.find("grid.length") != std::string::npos);
  }
  CHECK_THROWS_AS(ExperimentConfig::parse("n = 3\n"), ConfigError);
  auto c = ExperimentConfig::parse(kSmallSim);
  c.set("grid.typo", "1");
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("unknown key grid.typo"), ConfigError);
  auto d = ExperimentConfig::parse(kSmallSim);
  d.set("scenario.name", "harness:nope");
  CHECK_THROWS_AS(d.validate(), ConfigError);
  auto e = ExperimentConfig::parse(kSmallSim);
  e.set("potential.delta", "-1");
  CHECK_THROWS_AS(e.validate(), ConfigError);
  auto f = ExperimentConfig::parse(kSmallSim);
  f.set("bootstrap.eps0", "0");
  CHECK_THROWS_AS(f.validate(), ConfigError);
}

TEST_CASE("describe") {
  CHECK(describe_scenario("born-series").find("Duhamel") != std::string::npos);
  CHECK(describe_scenario("harness:smo1").find("local smoothing") != std::string::npos);
  for (const auto& id : scenario_ids()) CHECK_FALSE(describe_scenario(id).empty());
  try {
    describe_scenario("nope");
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    const std::string m = e.what();
    CHECK(m.find("harness:str1") != std::string::npos);
    CHECK(m.find("wave-operator") != std::string::npos);
  }
}

TEST_CASE("certify on the bundled example passes") {
  const auto cfg = ExperimentConfig::load(fs::path(RLAB_SOURCE_DIR) / "configs/certify.ini");
  const auto out = scratch("certify");
  const auto m = run_experiment(cfg, out);
  CHECK(m.pass);
  CHECK(m.config_hash == cfg.hash());
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(verify_manifest(out / "manifest.json").empty());
}

TEST_CASE("identical configs give identical hashes and CSV bytes") {
  const auto cfg = ExperimentConfig::parse(kSmallSim);
  const auto a = scratch("det_a"), b = scratch("det_b");
  const auto ma = run_experiment(cfg, a);
  const auto mb = run_experiment(cfg, b);
  CHECK(ma.pass);
  CHECK(ma.config_hash == mb.config_hash);
  CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
  CHECK(compare_manifests(ma, mb).empty());
  CHECK(diff_csv({}) == "metric,a,b,ratio,difference\n");
}

TEST_CASE("manifest lists every emitted file") {
  const auto cfg = ExperimentConfig::parse(kSmallSim);
  const auto out = scratch("complete");
  const auto m = run_experiment(cfg, out);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(out))
    if (e.is_regular_file() && e.path().filename() != "manifest.json") ++files;
  CHECK(files == m.artifacts.size());
  const auto back = RunManifest::load(out / "manifest.json");
  CHECK(back.artifacts.size() == m.artifacts.size());
  CHECK(back.metrics == m.metrics);

  fs::remove(out / "trajectory" / "snap_00001.rlab");
  const auto problems = verify_manifest(out / "manifest.json");
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("snap_00001.rlab") != std::string::npos);
}

TEST_CASE("compare reports differing metrics and rejects scenario mismatches") {
  RunManifest a, b;
  a.scenario = b.scenario = "born-series";
  a.metrics = {{"rate", 0.04}, {"lambda", 0.5}};
  b.metrics = {{"rate", 0.02}, {"lambda", 0.5}};
  const auto rows = compare_manifests(a, b);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].metric == "rate");
  CHECK(diff_csv(rows).find("rate,0.040000000000000001,0.02,0.5,") != std::string::npos);
  b.scenario = "certify";
  CHECK_THROWS_AS(compare_manifests(a, b), std::invalid_argument);
}

TEST_CASE("runtime guard trips are recorded in the manifest") {
  auto cfg = ExperimentConfig::parse(kSmallSim);
  cfg.set("scenario.name", "simulate-nonlinear");
  cfg.set("data.amplitude", "2000");
  cfg.set("potential.delta", "100");
  const auto out = scratch("guard");
  const auto m = run_experiment(cfg, out);
  CHECK_FALSE(m.pass);
  CHECK(m.error.find("blowup") != std::string::npos);
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("csv formatting is locale independent with 17 digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CsvTable t({"a", "b"});
  t.add_row(std::vector<double>{1.5, -0.25});
  CHECK(t.str() == "a,b\n1.5,-0.25\n");
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), std::invalid_argument);
}

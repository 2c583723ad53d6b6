#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "excursion/cli.hpp"

using namespace excursion;
using namespace excursion::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("excursion-test-" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("defaults") {
  const ExperimentConfig cfg = parse_config("{}");
  CHECK(cfg.experiment == Experiment::Constants);
  CHECK(cfg.model.alpha == 1.0);
  CHECK(cfg.model.beta == 2.0);
  CHECK(cfg.n_samples == 1000000);
  CHECK(cfg.grid.n_per_axis == 64);
  CHECK(cfg.pickands.s_ladder == std::vector<double>{1, 2, 4});
  CHECK_NOTHROW(cfg.validate());
  ExperimentConfig mc = cfg;
  mc.experiment = Experiment::Mc;
  CHECK(mc.levels() == std::vector<double>{2.0, 2.5, 3.0});
  CHECK(default_u_ladder(Experiment::Integrals) == std::vector<double>{1e3, 1e4, 1e5});
}

TEST_CASE("parse and reject") {
  const ExperimentConfig cfg = parse_config(R"(
experiment: mc   # comment
model: {alpha: 1.5, beta: 2.5, a: 0.3}
u_ladder: [2, 3]
seed: 9
grid:
  kind: strip
  n1: 16
  n2: 8
)");
  CHECK(cfg.experiment == Experiment::Mc);
  CHECK(cfg.model.alpha == 1.5);
  CHECK(cfg.u_ladder == std::vector<double>{2, 3});
  CHECK(cfg.seed == 9);
  CHECK(cfg.grid.kind == "strip");
  CHECK_THROWS_AS(parse_config("bogus: 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("model: {alpha: 1, gamma: 2}"), ConfigError);
  CHECK_THROWS_AS(parse_config("model: {alpha: one}"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment: nonsense"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_samples: -3"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(parse_config("model: {alpha: 2, beta: 1.5}").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment: mc\nn_samples: 0").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment: mc\nu_ladder: [3, 2]").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment: mc\ngrid: {kind: hex}").validate(), ConfigError);
  CHECK_THROWS_AS(
      parse_config("experiment: integrals\nintegrals: {branches: {log: 2.0}}").validate(),
      ConfigError);
}

TEST_CASE("dump and parse round-trip") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::Blocks;
  cfg.model.a = 0.1 + 0.2;
  cfg.u_ladder = {3.0, 4.0};
  cfg.h_alpha = 1.25;
  cfg.integrals.branches = {{"log", 0.7}};
  cfg.sweep.a_values = {0.5, 1.0};
  const std::string text = dump_config(cfg);
  const ExperimentConfig back = parse_config(text);
  CHECK(back.experiment == Experiment::Blocks);
  CHECK(back.model.a == cfg.model.a);
  CHECK(back.u_ladder == cfg.u_ladder);
  CHECK(back.h_alpha.value() == 1.25);
  CHECK(back.integrals.branches == cfg.integrals.branches);
  CHECK(back.sweep.a_values == cfg.sweep.a_values);
  CHECK(dump_config(back) == text);
}

TEST_CASE("CSV formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(NAN) == "nan");
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  const fs::path dir = scratch("csv");
  fs::create_directories(dir);
  {
    CsvWriter w(dir / "t.csv", {"x", "label"});
    w.row() << 0.5 << "a,b";
    w.row() << 3 << "";
  }
  CHECK(slurp(dir / "t.csv") == "x,label\r\n0.5,\"a,b\"\r\n3,\r\n");
  fs::remove_all(dir);
}

TEST_CASE("execute: constants report and MANIFEST") {
  ExperimentConfig cfg;
  cfg.output_dir = scratch("constants");
  std::ostringstream out, err;
  REQUIRE(execute(cfg, out, err, "excursion constants") == kExitOk);
  const std::string report = slurp(cfg.output_dir / "constants.json");
  CHECK(report.find("\"G_beta\": 0.886226925") != std::string::npos);
  CHECK(report.find("\"K_beta\": 0.6045997") != std::string::npos);
  const std::string manifest = slurp(cfg.output_dir / "MANIFEST");
  CHECK(manifest.find("status: complete") != std::string::npos);
  CHECK(manifest.find("seed: 20240611") != std::string::npos);
  CHECK(manifest.find("wall_seconds: ") != std::string::npos);
  CHECK(manifest.find("command: excursion constants") != std::string::npos);
  fs::remove_all(cfg.output_dir);
}

TEST_CASE("execute: invalid inputs exit with status 2") {
  ExperimentConfig cfg;
  cfg.output_dir = scratch("invalid");
  cfg.model.alpha = 2.0;
  cfg.model.beta = 1.5;
  std::ostringstream out, err;
  CHECK(execute(cfg, out, err) == kExitConfig);
  CHECK(err.str().find("error:") != std::string::npos);
  CHECK(slurp(cfg.output_dir / "MANIFEST").find("status: invalid-config") != std::string::npos);

  cfg = {};
  cfg.output_dir = scratch("invalid");
  cfg.experiment = Experiment::Mc;
  cfg.n_samples = 0;
  CHECK(execute(cfg, out, err) == kExitConfig);
  fs::remove_all(cfg.output_dir);
}

TEST_CASE("execute: a reduced mc run is reproducible") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::Mc;
  cfg.model.a = 2.0;
  cfg.grid.n_per_axis = 8;
  cfg.n_samples = 2000;
  cfg.output_dir = scratch("mc-a");
  std::ostringstream out, err;
  REQUIRE(execute(cfg, out, err) == kExitOk);
  const std::string first = slurp(cfg.output_dir / "mc.csv");
  CHECK(first.rfind("u,p_hat,std_err,prediction,ratio\r\n", 0) == 0);
  const fs::path a = cfg.output_dir;
  cfg.output_dir = scratch("mc-b");
  cfg.workers = 3;
  REQUIRE(execute(cfg, out, err) == kExitOk);
  CHECK(slurp(cfg.output_dir / "mc.csv") == first);
  fs::remove_all(a);
  fs::remove_all(cfg.output_dir);
}

TEST_CASE("execute: sweep marks both boundaries") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::Sweep;
  cfg.output_dir = scratch("sweep");
  std::ostringstream out, err;
  REQUIRE(execute(cfg, out, err) == kExitOk);
  const std::string svg = slurp(cfg.output_dir / "sweep.svg");
  CHECK(svg.find("a0 = 0.67") != std::string::npos);
  CHECK(svg.find("beta/2 = 1.00") != std::string::npos);
  const std::string csv = slurp(cfg.output_dir / "sweep.csv");
  CHECK(csv.find("0.66666666666666663,LogProduct,") != std::string::npos);
  fs::remove_all(cfg.output_dir);
}

TEST_CASE("render_sweep_svg with no rows") {
  const std::string svg = render_sweep_svg({{}, 0.5, 1.0, "a < b & c"});
  CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(svg.find("<svg") == 0);
}

TEST_CASE("shipped configs load and validate") {
  int n = 0;
  for (const auto& e : fs::directory_iterator(EXCURSION_CONFIG_DIR)) {
    if (e.path().extension() != ".yaml") continue;
    CAPTURE(e.path().string());
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg = load_config(e.path()));
    CHECK_NOTHROW(cfg.validate());
    ++n;
  }
  CHECK(n >= 6);
}

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "excursion/cli.hpp"
#include "excursion/error.hpp"
#include "excursion/fieldsim.hpp"
#include "excursion/parallel.hpp"
#include "excursion/quad.hpp"

namespace excursion::cli {

using nlohmann::json;

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

RunOutcome finish(RunContext& ctx, const json& report, std::string table) {
  const std::string name = std::string(to_string(ctx.cfg.experiment)) + ".json";
  RunOutcome out;
  out.json = report.dump(2) + "\n";
  write_text(ctx.file(name), out.json);
  out.table = std::move(table);
  out.files = ctx.files;
  out.warnings = ctx.warnings;
  return out;
}

json model_json(const ExperimentConfig& cfg) {
  return {{"alpha", cfg.model.alpha}, {"beta", cfg.model.beta}, {"a", cfg.model.a},
          {"T", cfg.model.T},         {"c1", cfg.model.c1},     {"c2", cfg.model.c2}};
}

json prediction_json(const AsymptoticPrediction& p) {
  return {{"prefactor", p.prefactor}, {"u_power", p.u_power}, {"log_power", p.log_power}};
}

pickands::FbmMethod parse_method(const std::string& m) {
  if (m == "cholesky") return pickands::FbmMethod::Cholesky;
  if (m == "circulant") return pickands::FbmMethod::Circulant;
  return pickands::FbmMethod::Auto;
}

pickands::ExtrapolationProtocol protocol_of(const ExperimentConfig& cfg) {
  pickands::ExtrapolationProtocol p;
  p.s_ladder = cfg.pickands.s_ladder;
  p.max_spacing_power = cfg.pickands.max_spacing_power;
  p.n_replicates = cfg.pickands.n_replicates;
  p.seed = cfg.seed;
  p.run = {cfg.workers, parse_method(cfg.pickands.method)};
  return p;
}

struct ResolvedH {
  double value = 1.0;
  std::string source;
  double std_err = 0.0;
};

// Configured value, then the known table, then the slope estimator.
ResolvedH resolve_h(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  if (cfg.h_alpha) return {*cfg.h_alpha, "config", 0.0};
  if (auto k = asymptotics::known_pickands_constant(cfg.model.alpha)) return {*k, "known", 0.0};
  const auto est = pickands::pickands_constant(cfg.model.alpha, protocol_of(cfg));
  if (est.disagreement) ctx.warnings.push_back("pickands: " + est.warning);
  return {est.slope.value, "estimated", est.slope.std_err};
}

std::string row_text(std::initializer_list<std::pair<const char*, double>> cols) {
  std::ostringstream os;
  for (const auto& [name, v] : cols) {
    os << std::setw(10) << name << " = " << std::setw(24) << format_double(v) << "\n";
  }
  return os.str();
}

}  // namespace

std::filesystem::path RunContext::file(const std::string& name) {
  auto p = out_dir / name;
  files.push_back(p);
  return p;
}

RunOutcome run_constants(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const ModelParams params = cfg.model_params();
  const auto& q = cfg.quadrature;
  const double g = quad::g_beta(cfg.model.beta);
  const double k = quad::k_beta(cfg.model.beta, q);
  const double l1 = quad::trend_l(cfg.model.c1, q);
  const double l2 = quad::trend_l(cfg.model.c2, q);
  const double kc = quad::trend_k(cfg.model.c1, cfg.model.c2, q);
  const double a0 = model::regime_threshold(cfg.model.alpha, cfg.model.beta);
  const Regime regime = model::classify_regime(params);

  json report = {{"experiment", "constants"},
                 {"model", model_json(cfg)},
                 {"G_beta", g},
                 {"K_beta", k},
                 {"L_c1", l1},
                 {"L_c2", l2},
                 {"K_c1_c2", kc},
                 {"a0", a0},
                 {"beta_half", cfg.model.beta / 2.0},
                 {"regime", std::string(to_string(regime))}};
  std::string table = row_text({{"G_beta", g},
                                {"K_beta", k},
                                {"L(c1)", l1},
                                {"L(c2)", l2},
                                {"K(c1,c2)", kc},
                                {"a0", a0},
                                {"beta/2", cfg.model.beta / 2.0}});
  table += std::string(10 - 6, ' ') + "regime = " + std::string(to_string(regime)) + "\n";
  return finish(ctx, report, table);
}

RunOutcome run_integrals(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& q = cfg.quadrature;
  const bool trend = cfg.model.c1 != 0.0 || cfg.model.c2 != 0.0;
  const std::vector<double> levels = cfg.levels();
  json report = {{"experiment", "integrals"}, {"model", model_json(cfg)}, {"branches", json::object()}};
  std::ostringstream table;
  table << std::setw(10) << "branch" << std::setw(14) << "u" << std::setw(26) << "ratio" << "\n";

  for (const auto& [name, a] : cfg.integrals.branches) {
    quad::IntegralSpec spec;
    spec.gamma = cfg.integrals.gamma;
    spec.beta = cfg.model.beta;
    spec.a = a;
    spec.delta = cfg.integrals.delta;
    spec.c1 = cfg.model.c1;
    spec.c2 = cfg.model.c2;
    CsvWriter csv(ctx.file("integrals_" + name + ".csv"),
                  {"u", "I_quadrature", "I_asymptote", "ratio"});
    const AsymptoticPrediction asym =
        trend ? quad::i_trend_asymptote(spec, q) : quad::i_gamma_asymptote(spec, q);
    json rows = json::array();
    for (double u : levels) {
      spec.u = u;
      const double v = trend ? quad::i_trend(spec, q) : quad::i_gamma(spec, q);
      const double w = asym.evaluate(u);
      csv.row() << u << v << w << v / w;
      rows.push_back({{"u", u}, {"I_quadrature", v}, {"I_asymptote", w}, {"ratio", v / w}});
      table << std::setw(10) << name << std::setw(14) << format_double(u) << std::setw(26)
            << format_double(v / w) << "\n";
    }
    report["branches"][name] = {{"a", a}, {"asymptote", prediction_json(asym)}, {"rows", rows}};
  }

  const auto& j = cfg.integrals.j_lambda;
  if (!j.lambdas.empty()) {
    CsvWriter csv(ctx.file("j_lambda.csv"), {"lambda", "J_scaled", "ratio"});
    json rows = json::array();
    for (double l : j.lambdas) {
      const double s = quad::j_lambda_scaled(l, j.p, j.q, j.gamma, q);
      const double r = quad::j_lambda_ratio(l, j.p, j.q, j.gamma, q);
      csv.row() << l << s << r;
      rows.push_back({{"lambda", l}, {"J_scaled", s}, {"ratio", r}});
      table << std::setw(10) << "J" << std::setw(14) << format_double(l) << std::setw(26)
            << format_double(r) << "\n";
    }
    report["j_lambda"] = {{"p", j.p}, {"q", j.q}, {"gamma", j.gamma}, {"rows", rows}};
  }
  return finish(ctx, report, table.str());
}

RunOutcome run_pickands(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto est = pickands::pickands_constant(cfg.model.alpha, protocol_of(cfg));
  {
    CsvWriter csv(ctx.file("pickands_rungs.csv"),
                  {"S", "n_points", "spacing", "H", "std_err"});
    for (const auto& r : est.rungs) {
      csv.row() << r.horizon << r.n_points << r.horizon / static_cast<double>(r.n_points - 1)
                << r.value << r.std_err;
    }
  }
  {
    CsvWriter csv(ctx.file("pickands.csv"), {"estimator", "value", "std_err"});
    csv.row() << "slope" << est.slope.value << est.slope.std_err;
    csv.row() << "naive" << est.naive.value << est.naive.std_err;
  }
  if (est.disagreement) ctx.warnings.push_back("pickands: " + est.warning);
  json report = {{"experiment", "pickands"},
                 {"alpha", cfg.model.alpha},
                 {"estimate", est.slope.value},
                 {"std_err", est.slope.std_err},
                 {"naive", est.naive.value},
                 {"naive_std_err", est.naive.std_err},
                 {"joint_std_err", est.joint_std_err},
                 {"disagreement", est.disagreement},
                 {"warning", est.warning},
                 {"n_replicates", est.slope.n_replicates},
                 {"seed", cfg.seed}};
  if (auto k = asymptotics::known_pickands_constant(cfg.model.alpha)) report["known_value"] = *k;
  std::string table = row_text({{"H_alpha", est.slope.value},
                                {"std_err", est.slope.std_err},
                                {"H(S)/S", est.naive.value}});
  return finish(ctx, report, table);
}

RunOutcome run_mc(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const ModelParams params = cfg.model_params();
  const auto& g = cfg.grid;
  const fieldsim::GridField grid =
      g.kind == "strip"          ? fieldsim::build_strip_grid(params, g.width, g.n1, g.n2)
      : g.kind == "side_refined" ? fieldsim::build_side_refined_grid(params, g.width, g.n_fine,
                                                                     g.n_coarse)
                                 : fieldsim::build_grid(params, g.n_per_axis);
  const ResolvedH h = resolve_h(ctx);
  const auto rows = fieldsim::ratio_harness(params, cfg.levels(), grid, cfg.n_samples, cfg.seed,
                                            h.value, cfg.workers);
  const AsymptoticPrediction pred = params.has_trend() ? asymptotics::predict_trend(params, h.value, cfg.quadrature)
                                                       : asymptotics::predict(params, h.value, cfg.quadrature);
  std::ostringstream table;
  table << std::setw(8) << "u" << std::setw(16) << "p_hat" << std::setw(16) << "std_err"
        << std::setw(16) << "prediction" << std::setw(12) << "ratio" << "\n";
  json jrows = json::array();
  {
    CsvWriter csv(ctx.file("mc.csv"), {"u", "p_hat", "std_err", "prediction", "ratio"});
    for (const auto& r : rows) {
      csv.row() << r.u << r.p_hat << r.std_err << r.prediction << r.ratio;
      jrows.push_back({{"u", r.u}, {"p_hat", r.p_hat}, {"std_err", r.std_err},
                       {"prediction", r.prediction}, {"ratio", r.ratio}});
      table << std::setw(8) << r.u << std::setw(16) << r.p_hat << std::setw(16) << r.std_err
            << std::setw(16) << r.prediction << std::setw(12) << r.ratio << "\n";
    }
  }
  json report = {{"experiment", "mc"},
                 {"model", model_json(cfg)},
                 {"regime", std::string(to_string(model::classify_regime(params)))},
                 {"grid", {{"kind", g.kind}, {"n1", grid.n1()}, {"n2", grid.n2()}, {"jitter", grid.jitter()}}},
                 {"h_alpha", h.value},
                 {"h_alpha_source", h.source},
                 {"h_alpha_std_err", h.std_err},
                 {"prediction", prediction_json(pred)},
                 {"n_samples", cfg.n_samples},
                 {"seed", cfg.seed},
                 {"rows", jrows}};
  return finish(ctx, report, table.str());
}

RunOutcome run_blocks(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const ModelParams params = cfg.model_params();
  const auto& b = cfg.blocks;
  fieldsim::BlockOptions opts;
  opts.n_per_axis = b.n_per_axis;
  opts.n_samples = cfg.n_samples;
  opts.seed = cfg.seed;
  opts.pickands_replicates = b.pickands_replicates;
  opts.workers = cfg.workers;

  std::ostringstream table;
  table << std::setw(8) << "u" << std::setw(16) << "p_hat" << std::setw(16) << "prediction"
        << std::setw(12) << "ratio" << "\n";
  json jrows = json::array();
  CsvWriter csv(ctx.file("blocks.csv"), {"u", "v1", "v2", "s1", "s2", "p_hat", "std_err", "h1",
                                         "h2", "prediction", "ratio"});
  for (double u : cfg.levels()) {
    const fieldsim::BlockSpec spec{{b.v1, b.v2}, b.s1, b.s2, u};
    const fieldsim::BlockCheck c = fieldsim::mc_block_exceedance(params, spec, opts);
    csv.row() << u << b.v1 << b.v2 << b.s1 << b.s2 << c.mc.p_hat << c.mc.std_err << c.h1 << c.h2
              << c.prediction << c.ratio;
    jrows.push_back({{"u", u}, {"p_hat", c.mc.p_hat}, {"std_err", c.mc.std_err}, {"h1", c.h1},
                     {"h1_std_err", c.h1_std_err}, {"h2", c.h2}, {"h2_std_err", c.h2_std_err},
                     {"prediction", c.prediction}, {"ratio", c.ratio}});
    table << std::setw(8) << u << std::setw(16) << c.mc.p_hat << std::setw(16) << c.prediction
          << std::setw(12) << c.ratio << "\n";
  }
  json report = {{"experiment", "blocks"},
                 {"model", model_json(cfg)},
                 {"block", {{"v1", b.v1}, {"v2", b.v2}, {"s1", b.s1}, {"s2", b.s2}}},
                 {"n_per_axis", b.n_per_axis},
                 {"n_samples", cfg.n_samples},
                 {"seed", cfg.seed},
                 {"rows", jrows}};
  return finish(ctx, report, table.str());
}

RunOutcome run_sweep(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& s = cfg.sweep;
  const double alpha = cfg.model.alpha, beta = cfg.model.beta;
  const double a0 = model::regime_threshold(alpha, beta);
  std::vector<double> a_values = s.a_values;
  if (a_values.empty()) {
    a_values = fieldsim::linspace(s.a_min, s.a_max, s.n_points);
    for (double extra : {a0, beta / 2.0}) {
      if (extra >= s.a_min && extra <= s.a_max) a_values.push_back(extra);
    }
    std::sort(a_values.begin(), a_values.end());
    a_values.erase(std::unique(a_values.begin(), a_values.end()), a_values.end());
  }
  const ResolvedH h = resolve_h(ctx);
  const auto rows = asymptotics::regime_sweep(alpha, beta, a_values, s.u, h.value, cfg.quadrature);

  std::ostringstream table;
  table << std::setw(22) << "a" << std::setw(18) << "regime" << std::setw(22) << "u_power"
        << std::setw(6) << "log" << "\n";
  json jrows = json::array();
  {
    CsvWriter csv(ctx.file("sweep.csv"),
                  {"a", "regime", "u_power", "log_power", "prefactor", "value"});
    for (const auto& r : rows) {
      csv.row() << r.a << to_string(r.regime) << r.u_power << r.log_power << r.prefactor
                << r.value;
      jrows.push_back({{"a", r.a}, {"regime", std::string(to_string(r.regime))},
                       {"u_power", r.u_power}, {"log_power", r.log_power},
                       {"prefactor", r.prefactor}, {"value", r.value}});
      table << std::setw(22) << format_double(r.a) << std::setw(18) << to_string(r.regime)
            << std::setw(22) << format_double(r.u_power) << std::setw(6) << r.log_power << "\n";
    }
  }
  std::ostringstream title;
  title << "Order of p(u) in u: alpha = " << format_double(alpha)
        << ", beta = " << format_double(beta);
  write_text(ctx.file("sweep.svg"), render_sweep_svg({rows, a0, beta / 2.0, title.str()}));
  json report = {{"experiment", "sweep"},
                 {"alpha", alpha},
                 {"beta", beta},
                 {"a0", a0},
                 {"beta_half", beta / 2.0},
                 {"u", s.u},
                 {"h_alpha", h.value},
                 {"h_alpha_source", h.source},
                 {"rows", jrows}};
  return finish(ctx, report, table.str());
}

namespace {

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                    const std::string& command_line, const std::string& started,
                    const std::string& status,
                    const std::string& error, double wall_seconds,
                    const std::vector<std::filesystem::path>& files,
                    const std::vector<std::string>& warnings) {
  std::ostringstream os;
  os << "excursion " << EXCURSION_VERSION << "\n";
  os << "experiment: " << to_string(cfg.experiment) << "\n";
  os << "status: " << status << "\n";
  if (!error.empty()) os << "error: " << error << "\n";
  os << "seed: " << cfg.seed << "\n";
  os << "workers: " << resolve_workers(cfg.workers) << "\n";
  os << "started_utc: " << started << "\n";
  os << "wall_seconds: " << std::fixed << std::setprecision(3) << wall_seconds << "\n";
  if (!command_line.empty()) os << "command: " << command_line << "\n";
  os << "files:\n";
  for (const auto& f : files) os << "  - " << f.filename().string() << "\n";
  for (const auto& w : warnings) os << "warning: " << w << "\n";
  os << "config:\n";
  std::istringstream cfg_text(dump_config(cfg));
  for (std::string line; std::getline(cfg_text, line);) os << "  " << line << "\n";
  write_text(dir / "MANIFEST", os.str());
}

}  // namespace

int execute(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err,
            const std::string& command_line) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) {
    err << "error: cannot create output directory " << cfg.output_dir << ": " << ec.message() << "\n";
    return kExitConfig;
  }
  RunContext ctx{cfg, cfg.output_dir, {}, {}};
  int code = kExitOk;
  std::string status = "complete", error;
  try {
    cfg.validate();
    RunOutcome r;
    switch (cfg.experiment) {
      case Experiment::Constants: r = run_constants(ctx); break;
      case Experiment::Integrals: r = run_integrals(ctx); break;
      case Experiment::Pickands: r = run_pickands(ctx); break;
      case Experiment::Mc: r = run_mc(ctx); break;
      case Experiment::Blocks: r = run_blocks(ctx); break;
      case Experiment::Sweep: r = run_sweep(ctx); break;
    }
    out << r.table;
  } catch (const ConfigError& e) {
    code = kExitConfig;
    status = "invalid-config";
    error = e.what();
  } catch (const std::invalid_argument& e) {
    code = kExitConfig;
    status = "invalid-input";
    error = e.what();
  } catch (const ConvergenceError& e) {
    code = kExitComputation;
    status = "incomplete";
    std::ostringstream os;
    os << e.what() << " (best estimate " << format_double(e.best_estimate()) << ", error bound "
       << format_double(e.error_bound()) << ")";
    error = os.str();
  } catch (const std::exception& e) {
    code = kExitComputation;
    status = "incomplete";
    error = e.what();
  }
  for (const auto& w : ctx.warnings) err << "warning: " << w << "\n";
  if (!error.empty()) err << "error: " << error << "\n";
  try {
    write_manifest(cfg, ctx.out_dir, command_line, started, status, error, elapsed(), ctx.files,
                   ctx.warnings);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (code == kExitOk) code = kExitComputation;
  }
  return code;
}

}  // namespace excursion::cli

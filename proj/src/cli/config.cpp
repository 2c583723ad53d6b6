#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "excursion/cli.hpp"
#include "excursion/quad/integrals.hpp"

namespace excursion::cli {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config: " + key + ": " + what);
}

void reject_unknown(const YAML::Node& node, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(where.empty() ? "<root>" : where, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      fail(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

std::string path_of(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double read_double(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(key, "expected a number");
  try {
    const std::string s = n.as<std::string>();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) fail(key, "expected a number, got '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(key, "expected a number");
  }
}

std::size_t read_count(const YAML::Node& n, const std::string& key) {
  const double v = read_double(n, key);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    fail(key, "expected a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

std::vector<double> read_list(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) fail(key, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    out.push_back(read_double(n[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string read_string(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(key, "expected a string");
  return n.as<std::string>();
}

template <class T, class Reader>
void maybe(const YAML::Node& parent, const std::string& where, const char* key, T& dst,
           Reader read) {
  const YAML::Node n = parent[key];
  if (n) dst = read(n, path_of(where, key));
}

void require_positive(double v, const std::string& key) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(key, "must be positive and finite");
}

void require_sorted_positive(const std::vector<double>& v, const std::string& key) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    require_positive(v[i], key);
    if (i > 0 && !(v[i] > v[i - 1])) fail(key, "must be strictly increasing");
  }
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::Constants: return "constants";
    case Experiment::Integrals: return "integrals";
    case Experiment::Pickands: return "pickands";
    case Experiment::Mc: return "mc";
    case Experiment::Blocks: return "blocks";
    case Experiment::Sweep: return "sweep";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (Experiment e : {Experiment::Constants, Experiment::Integrals, Experiment::Pickands,
                       Experiment::Mc, Experiment::Blocks, Experiment::Sweep}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("config: experiment: unknown experiment '" + std::string(name) + "'");
}

std::vector<double> default_u_ladder(Experiment e) {
  switch (e) {
    case Experiment::Integrals: return {1e3, 1e4, 1e5};
    case Experiment::Mc: return {2.0, 2.5, 3.0};
    case Experiment::Blocks: return {3.0, 4.0};
    default: return {};
  }
}

std::vector<double> ExperimentConfig::levels() const {
  return u_ladder.empty() ? default_u_ladder(experiment) : u_ladder;
}

ModelParams ExperimentConfig::model_params() const {
  try {
    return ModelParams(model.alpha, model.beta, model.a, model.T, model.c1, model.c2);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: model: ") + e.what());
  }
}

void ExperimentConfig::validate() const {
  const ModelParams params = model_params();
  try {
    quadrature.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: quadrature: ") + e.what());
  }
  require_sorted_positive(levels(), "u_ladder");
  if (h_alpha) require_positive(*h_alpha, "h_alpha");

  switch (experiment) {
    case Experiment::Constants:
      break;
    case Experiment::Integrals: {
      require_positive(integrals.gamma, "integrals.gamma");
      require_positive(integrals.delta, "integrals.delta");
      for (const auto& [name, a] : integrals.branches) {
        const std::string key = "integrals.branches." + name;
        require_positive(a, key);
        const auto branch = quad::integral_branch(model.beta, a);
        const char* expect = branch == quad::IntegralBranch::Log        ? "log"
                             : branch == quad::IntegralBranch::Critical ? "critical"
                                                                        : "classical";
        if (name != expect) {
          fail(key, "a = " + format_double(a) + " lies in the " + expect + " branch for beta = " +
                        format_double(model.beta));
        }
      }
      if (params.has_trend() && model.beta != 2.0) {
        fail("model", "trend integrals require beta = 2");
      }
      const auto& j = integrals.j_lambda;
      require_positive(j.p, "integrals.j_lambda.p");
      require_positive(j.q, "integrals.j_lambda.q");
      require_positive(j.gamma, "integrals.j_lambda.gamma");
      require_sorted_positive(j.lambdas, "integrals.j_lambda.lambdas");
      for (double l : j.lambdas) {
        if (!(l > 1.0)) fail("integrals.j_lambda.lambdas", "values must exceed 1");
      }
      break;
    }
    case Experiment::Pickands:
    case Experiment::Mc:
    case Experiment::Blocks:
    case Experiment::Sweep: {
      if (pickands.s_ladder.size() < 2) fail("pickands.s_ladder", "needs at least two rungs");
      require_sorted_positive(pickands.s_ladder, "pickands.s_ladder");
      require_positive(pickands.max_spacing_power, "pickands.max_spacing_power");
      if (pickands.n_replicates < 2) fail("pickands.n_replicates", "must be at least 2");
      if (pickands.method != "auto" && pickands.method != "cholesky" &&
          pickands.method != "circulant") {
        fail("pickands.method", "expected auto, cholesky or circulant");
      }
      break;
    }
  }

  if (experiment == Experiment::Mc) {
    if (n_samples == 0) fail("n_samples", "must be positive");
    if (params.has_trend() && model.beta != 2.0) {
      fail("model", "trend predictions require beta = 2");
    }
    for (double u : levels()) {
      if (!(u > 1.0)) fail("u_ladder", "levels must exceed 1");
    }
    const auto& g = grid;
    if (g.kind == "square") {
      if (g.n_per_axis < 2) fail("grid.n_per_axis", "must be at least 2");
    } else if (g.kind == "strip") {
      if (g.n1 < 2 || g.n2 < 2) fail("grid", "n1 and n2 must be at least 2");
      if (!(g.width > 0.0) || g.width > model.T) fail("grid.width", "must lie in (0, T]");
    } else if (g.kind == "side_refined") {
      if (g.n_fine < 2) fail("grid.n_fine", "must be at least 2");
      if (!(g.width > 0.0) || !(g.width < model.T)) fail("grid.width", "must lie in (0, T)");
    } else {
      fail("grid.kind", "expected square, strip or side_refined");
    }
  }
  if (experiment == Experiment::Blocks) {
    if (n_samples == 0) fail("n_samples", "must be positive");
    if (!(blocks.s1 >= 0.0) || !(blocks.s2 >= 0.0)) fail("blocks", "s1 and s2 must be >= 0");
    if (blocks.n_per_axis < 2) fail("blocks.n_per_axis", "must be at least 2");
    if (blocks.pickands_replicates < 2) fail("blocks.pickands_replicates", "must be at least 2");
  }
  if (experiment == Experiment::Sweep) {
    require_positive(sweep.u, "sweep.u");
    if (!(sweep.u > 1.0)) fail("sweep.u", "must exceed 1");
    if (sweep.a_values.empty()) {
      require_positive(sweep.a_min, "sweep.a_min");
      if (!(sweep.a_max > sweep.a_min)) fail("sweep.a_max", "must exceed a_min");
      if (sweep.n_points < 2) fail("sweep.n_points", "must be at least 2");
    } else {
      require_sorted_positive(sweep.a_values, "sweep.a_values");
    }
  }
}

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: YAML parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  if (!root || root.IsNull()) return cfg;
  reject_unknown(root, "",
                 {"experiment", "model", "u_ladder", "n_samples", "seed", "workers",
                  "output_dir", "h_alpha", "quadrature", "grid", "pickands", "integrals",
                  "blocks", "sweep"});

  if (root["experiment"]) cfg.experiment = parse_experiment(read_string(root["experiment"], "experiment"));
  maybe(root, "", "u_ladder", cfg.u_ladder, read_list);
  maybe(root, "", "n_samples", cfg.n_samples, read_count);
  if (root["seed"]) {
    const YAML::Node n = root["seed"];
    try {
      cfg.seed = n.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      fail("seed", "expected a nonnegative 64-bit integer");
    }
  }
  if (root["workers"]) {
    const std::size_t w = read_count(root["workers"], "workers");
    if (w > 1024) fail("workers", "at most 1024");
    cfg.workers = static_cast<unsigned>(w);
  }
  if (root["output_dir"]) cfg.output_dir = read_string(root["output_dir"], "output_dir");
  if (root["h_alpha"] && !root["h_alpha"].IsNull()) cfg.h_alpha = read_double(root["h_alpha"], "h_alpha");

  if (const YAML::Node m = root["model"]) {
    reject_unknown(m, "model", {"alpha", "beta", "a", "T", "c1", "c2"});
    maybe(m, "model", "alpha", cfg.model.alpha, read_double);
    maybe(m, "model", "beta", cfg.model.beta, read_double);
    maybe(m, "model", "a", cfg.model.a, read_double);
    maybe(m, "model", "T", cfg.model.T, read_double);
    maybe(m, "model", "c1", cfg.model.c1, read_double);
    maybe(m, "model", "c2", cfg.model.c2, read_double);
  }
  if (const YAML::Node q = root["quadrature"]) {
    reject_unknown(q, "quadrature", {"abs_tol", "rel_tol", "max_subdivisions", "tail_cut_tol"});
    maybe(q, "quadrature", "abs_tol", cfg.quadrature.abs_tol, read_double);
    maybe(q, "quadrature", "rel_tol", cfg.quadrature.rel_tol, read_double);
    maybe(q, "quadrature", "tail_cut_tol", cfg.quadrature.tail_cut_tol, read_double);
    if (q["max_subdivisions"]) {
      cfg.quadrature.max_subdivisions = read_count(q["max_subdivisions"], "quadrature.max_subdivisions");
    }
  }
  if (const YAML::Node g = root["grid"]) {
    reject_unknown(g, "grid", {"kind", "n_per_axis", "width", "n1", "n2", "n_fine", "n_coarse"});
    maybe(g, "grid", "kind", cfg.grid.kind, read_string);
    maybe(g, "grid", "n_per_axis", cfg.grid.n_per_axis, read_count);
    maybe(g, "grid", "width", cfg.grid.width, read_double);
    maybe(g, "grid", "n1", cfg.grid.n1, read_count);
    maybe(g, "grid", "n2", cfg.grid.n2, read_count);
    maybe(g, "grid", "n_fine", cfg.grid.n_fine, read_count);
    maybe(g, "grid", "n_coarse", cfg.grid.n_coarse, read_count);
  }
  if (const YAML::Node p = root["pickands"]) {
    reject_unknown(p, "pickands", {"s_ladder", "max_spacing_power", "n_replicates", "method"});
    maybe(p, "pickands", "s_ladder", cfg.pickands.s_ladder, read_list);
    maybe(p, "pickands", "max_spacing_power", cfg.pickands.max_spacing_power, read_double);
    maybe(p, "pickands", "n_replicates", cfg.pickands.n_replicates, read_count);
    maybe(p, "pickands", "method", cfg.pickands.method, read_string);
  }
  if (const YAML::Node in = root["integrals"]) {
    reject_unknown(in, "integrals", {"gamma", "delta", "branches", "j_lambda"});
    maybe(in, "integrals", "gamma", cfg.integrals.gamma, read_double);
    maybe(in, "integrals", "delta", cfg.integrals.delta, read_double);
    if (const YAML::Node b = in["branches"]) {
      reject_unknown(b, "integrals.branches", {"log", "critical", "classical"});
      cfg.integrals.branches.clear();
      for (const auto& kv : b) {
        const auto name = kv.first.as<std::string>();
        cfg.integrals.branches[name] = read_double(kv.second, "integrals.branches." + name);
      }
    }
    if (const YAML::Node j = in["j_lambda"]) {
      reject_unknown(j, "integrals.j_lambda", {"p", "q", "gamma", "lambdas"});
      maybe(j, "integrals.j_lambda", "p", cfg.integrals.j_lambda.p, read_double);
      maybe(j, "integrals.j_lambda", "q", cfg.integrals.j_lambda.q, read_double);
      maybe(j, "integrals.j_lambda", "gamma", cfg.integrals.j_lambda.gamma, read_double);
      maybe(j, "integrals.j_lambda", "lambdas", cfg.integrals.j_lambda.lambdas, read_list);
    }
  }
  if (const YAML::Node b = root["blocks"]) {
    reject_unknown(b, "blocks", {"v1", "v2", "s1", "s2", "n_per_axis", "pickands_replicates"});
    maybe(b, "blocks", "v1", cfg.blocks.v1, read_double);
    maybe(b, "blocks", "v2", cfg.blocks.v2, read_double);
    maybe(b, "blocks", "s1", cfg.blocks.s1, read_double);
    maybe(b, "blocks", "s2", cfg.blocks.s2, read_double);
    maybe(b, "blocks", "n_per_axis", cfg.blocks.n_per_axis, read_count);
    maybe(b, "blocks", "pickands_replicates", cfg.blocks.pickands_replicates, read_count);
  }
  if (const YAML::Node s = root["sweep"]) {
    reject_unknown(s, "sweep", {"a_values", "a_min", "a_max", "n_points", "u"});
    maybe(s, "sweep", "a_values", cfg.sweep.a_values, read_list);
    maybe(s, "sweep", "a_min", cfg.sweep.a_min, read_double);
    maybe(s, "sweep", "a_max", cfg.sweep.a_max, read_double);
    maybe(s, "sweep", "n_points", cfg.sweep.n_points, read_count);
    maybe(s, "sweep", "u", cfg.sweep.u, read_double);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

namespace {

YAML::Node list_node(const std::vector<double>& v) {
  YAML::Node n(YAML::NodeType::Sequence);
  for (double x : v) n.push_back(format_double(x));
  n.SetStyle(YAML::EmitterStyle::Flow);
  return n;
}

}  // namespace

std::string dump_config(const ExperimentConfig& cfg) {
  auto num = [](double v) { return format_double(v); };
  YAML::Node root;
  root["experiment"] = std::string(to_string(cfg.experiment));
  YAML::Node m;
  m["alpha"] = num(cfg.model.alpha);
  m["beta"] = num(cfg.model.beta);
  m["a"] = num(cfg.model.a);
  m["T"] = num(cfg.model.T);
  m["c1"] = num(cfg.model.c1);
  m["c2"] = num(cfg.model.c2);
  root["model"] = m;
  root["u_ladder"] = list_node(cfg.levels());
  root["n_samples"] = cfg.n_samples;
  root["seed"] = cfg.seed;
  root["workers"] = cfg.workers;
  root["output_dir"] = cfg.output_dir.string();
  if (cfg.h_alpha) {
    root["h_alpha"] = num(*cfg.h_alpha);
  } else {
    root["h_alpha"] = YAML::Node(YAML::NodeType::Null);
  }
  YAML::Node q;
  q["abs_tol"] = num(cfg.quadrature.abs_tol);
  q["rel_tol"] = num(cfg.quadrature.rel_tol);
  q["max_subdivisions"] = cfg.quadrature.max_subdivisions;
  q["tail_cut_tol"] = num(cfg.quadrature.tail_cut_tol);
  root["quadrature"] = q;
  YAML::Node g;
  g["kind"] = cfg.grid.kind;
  g["n_per_axis"] = cfg.grid.n_per_axis;
  g["width"] = num(cfg.grid.width);
  g["n1"] = cfg.grid.n1;
  g["n2"] = cfg.grid.n2;
  g["n_fine"] = cfg.grid.n_fine;
  g["n_coarse"] = cfg.grid.n_coarse;
  root["grid"] = g;
  YAML::Node p;
  p["s_ladder"] = list_node(cfg.pickands.s_ladder);
  p["max_spacing_power"] = num(cfg.pickands.max_spacing_power);
  p["n_replicates"] = cfg.pickands.n_replicates;
  p["method"] = cfg.pickands.method;
  root["pickands"] = p;
  YAML::Node in;
  in["gamma"] = num(cfg.integrals.gamma);
  in["delta"] = num(cfg.integrals.delta);
  YAML::Node br(YAML::NodeType::Map);
  for (const auto& [name, a] : cfg.integrals.branches) br[name] = num(a);
  in["branches"] = br;
  YAML::Node j;
  j["p"] = num(cfg.integrals.j_lambda.p);
  j["q"] = num(cfg.integrals.j_lambda.q);
  j["gamma"] = num(cfg.integrals.j_lambda.gamma);
  j["lambdas"] = list_node(cfg.integrals.j_lambda.lambdas);
  in["j_lambda"] = j;
  root["integrals"] = in;
  YAML::Node b;
  b["v1"] = num(cfg.blocks.v1);
  b["v2"] = num(cfg.blocks.v2);
  b["s1"] = num(cfg.blocks.s1);
  b["s2"] = num(cfg.blocks.s2);
  b["n_per_axis"] = cfg.blocks.n_per_axis;
  b["pickands_replicates"] = cfg.blocks.pickands_replicates;
  root["blocks"] = b;
  YAML::Node s;
  s["a_values"] = list_node(cfg.sweep.a_values);
  s["a_min"] = num(cfg.sweep.a_min);
  s["a_max"] = num(cfg.sweep.a_max);
  s["n_points"] = cfg.sweep.n_points;
  s["u"] = num(cfg.sweep.u);
  root["sweep"] = s;

  YAML::Emitter out;
  out << root;
  return std::string(out.c_str()) + "\n";
}

}  // namespace excursion::cli

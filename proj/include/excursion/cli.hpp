#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "excursion/asymptotics.hpp"
#include "excursion/pickands.hpp"
#include "excursion/quad/integrate.hpp"

namespace excursion::cli {

enum class Experiment { Constants, Integrals, Pickands, Mc, Blocks, Sweep };

std::string_view to_string(Experiment e) noexcept;
Experiment parse_experiment(std::string_view name);

/// Raised for malformed or inconsistent configuration; maps to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ModelSection {
  double alpha = 1.0;
  double beta = 2.0;
  double a = 2.0;
  double T = 1.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

struct GridSection {
  /// square | strip | side_refined
  std::string kind = "square";
  std::size_t n_per_axis = 64;
  double width = 0.3;
  std::size_t n1 = 128;
  std::size_t n2 = 64;
  std::size_t n_fine = 64;
  std::size_t n_coarse = 32;
};

struct PickandsSection {
  std::vector<double> s_ladder{1.0, 2.0, 4.0};
  double max_spacing_power = 0.05;
  std::size_t n_replicates = 1000000;
  /// auto | cholesky | circulant
  std::string method = "auto";
};

struct JLambdaSection {
  double p = 1.0 / 3.0;
  double q = 0.5;
  double gamma = 1.0;
  std::vector<double> lambdas{1e4, 1e6, 1e8};
};

struct IntegralsSection {
  double gamma = 1.0;
  double delta = 1.0;
  /// Branch name (log | critical | classical) -> product exponent a.
  std::map<std::string, double> branches{{"log", 0.8}, {"critical", 1.0}, {"classical", 2.0}};
  JLambdaSection j_lambda{};
};

struct BlocksSection {
  double v1 = 0.0;
  double v2 = 0.0;
  double s1 = 2.0;
  double s2 = 2.0;
  std::size_t n_per_axis = 33;
  std::size_t pickands_replicates = 200000;
};

struct SweepSection {
  /// Explicit a values; when empty an evenly spaced range from a_min to
  /// a_max with n_points entries is used, plus a0 and beta/2.
  std::vector<double> a_values;
  double a_min = 0.1;
  double a_max = 3.0;
  std::size_t n_points = 59;
  double u = 10.0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Constants;
  ModelSection model{};
  /// Empty selects the experiment default (see default_u_ladder).
  std::vector<double> u_ladder;
  std::size_t n_samples = 1000000;
  std::uint64_t seed = 20240611;
  unsigned workers = 1;
  std::filesystem::path output_dir = "excursion-out";
  /// Pickands constant for predictions; unset uses the known table, then
  /// the estimator configured under `pickands`.
  std::optional<double> h_alpha;
  quad::QuadratureConfig quadrature{};
  GridSection grid{};
  PickandsSection pickands{};
  IntegralsSection integrals{};
  BlocksSection blocks{};
  SweepSection sweep{};

  ModelParams model_params() const;
  std::vector<double> levels() const;
  /// Throws ConfigError on the first violated precondition.
  void validate() const;
};

std::vector<double> default_u_ladder(Experiment e);

/// Parses YAML text. Unknown keys at any level are rejected.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// YAML echo of every field, defaults included.
std::string dump_config(const ExperimentConfig& cfg);

// ---- output ---------------------------------------------------------------

/// 17 significant digits, the shortest form that round-trips every double.
std::string format_double(double v);

/// RFC-4180 quoting: fields containing a comma, quote, CR or LF are quoted
/// and embedded quotes doubled.
std::string csv_field(std::string_view s);

/// Row-at-a-time CSV writer; each row is flushed so that an aborted run
/// leaves every completed row on disk.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  class Row {
   public:
    explicit Row(CsvWriter& w) : w_(w) {}
    Row& operator<<(double v);
    Row& operator<<(long long v);
    Row& operator<<(std::size_t v);
    Row& operator<<(int v) { return *this << static_cast<long long>(v); }
    Row& operator<<(std::string_view s);
    Row& operator<<(const char* s) { return *this << std::string_view(s); }
    ~Row() noexcept(false);

   private:
    void sep();
    CsvWriter& w_;
    std::string line_;
    std::size_t fields_ = 0;
  };

  Row row() { return Row(*this); }

 private:
  void write_line(const std::string& line);
  struct Impl;
  Impl* impl_;
};

struct SweepPlot {
  std::vector<asymptotics::SweepRow> rows;
  double a0 = 0.0;
  double beta_half = 0.0;
  std::string title;
};

/// Line plot of u_power and the log flag against a, with vertical markers
/// at a0 and beta/2. Paths and text only.
std::string render_sweep_svg(const SweepPlot& plot);

// ---- runs -----------------------------------------------------------------

struct RunOutcome {
  /// Machine-readable summary, also written as <experiment>.json.
  std::string json;
  /// Human-readable table for the terminal.
  std::string table;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// Tracks files as they are created so an interrupted run can still list them.
struct RunContext {
  const ExperimentConfig& cfg;
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;

  std::filesystem::path file(const std::string& name);
};

RunOutcome run_constants(RunContext& ctx);
RunOutcome run_integrals(RunContext& ctx);
RunOutcome run_pickands(RunContext& ctx);
RunOutcome run_mc(RunContext& ctx);
RunOutcome run_blocks(RunContext& ctx);
RunOutcome run_sweep(RunContext& ctx);

enum ExitCode : int { kExitOk = 0, kExitComputation = 1, kExitConfig = 2 };

/// Validates, dispatches on cfg.experiment, and writes MANIFEST in every
/// case. Diagnostics go to `err`, the table to `out`.
int execute(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err,
            const std::string& command_line = {});

}  // namespace excursion::cli

#pragma once
// Seeded instance generation, batches, parameter sweeps and their CSV /
// plot-data / SVG outputs.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hazyard/oracle.hpp"
#include "hazyard/rules.hpp"
#include "hazyard/strategy.hpp"
#include "hazyard/yard.hpp"

namespace hazyard {

// Percentage of occupied cells per dangerous/food type; T5 takes the rest.
struct TypeMix {
  std::map<ContainerType, double> percent;

  // 1% T1, 7% T2, 7% T3, 20% T4.
  static TypeMix reference();
  // "t1=1,t2=7,t3=7,t4=20" (labels are case-insensitive).
  static TypeMix parse(std::string_view text);

  double get(ContainerType t) const;
  void validate() const;

  friend bool operator==(const TypeMix&, const TypeMix&) = default;
};

struct ExperimentSpec {
  YardDimensions dims;
  double fill = 0.75;  // fraction of capacity
  TypeMix mix = TypeMix::reference();
  StrategyParams params;
  std::size_t runs = 1;
  std::uint64_t master_seed = 0;

  // 10x10x4, 75 % fill, 1/7/7/20 mix, strategy defaults.
  static ExperimentSpec reference(Strategy s);
  void validate() const;
};

// Container count per type (T5 included) after round-half-up.
std::map<ContainerType, std::size_t> type_counts(const ExperimentSpec& spec);

// Random gravity-valid instance; deterministic in (master_seed, run_index).
YardConfiguration generate_instance(const ExperimentSpec& spec, std::size_t run_index);

// Strategy parameters for one run: the spec's with a seed derived from
// (master_seed, run_index).
StrategyParams run_params(const ExperimentSpec& spec, std::size_t run_index);

struct RunRow {
  std::size_t run = 0;
  RunStatus status = RunStatus::safe;
  std::size_t movements = 0;
  int final_worst = 0;
  long final_sum = 0;
  double runtime_ms = 0.0;
};

struct RunStatistics {
  std::size_t runs = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;  // percent
  // Over successful runs only; all zero when no run succeeded.
  std::size_t min_movements = 0;
  std::size_t max_movements = 0;
  double avg_movements = 0.0;
  std::map<RunStatus, std::size_t> status_counts;
  double avg_runtime_ms = 0.0;
};

RunStatistics summarize(const std::vector<RunRow>& rows);

struct BatchResult {
  ExperimentSpec spec;
  RunStatistics stats;
  std::vector<RunRow> rows;
};

struct BatchOptions {
  // Replay every trace through the oracle; a failure throws VerificationError.
  bool verify = true;
};

BatchResult run_batch(const ExperimentSpec& spec, const RuleMatrix& m, BatchOptions options = {});

// Runs CABS on every instance of a small spec; each run that ends in
// local_minimum or cycle_abort is checked by exhaustive enumeration.
struct AuditCase {
  std::size_t run = 0;
  RunStatus status = RunStatus::local_minimum;
  bool safe_exists = false;  // a safe placement was missed by the heuristic
};

struct AuditReport {
  std::size_t instances = 0;
  std::vector<AuditCase> cases;

  std::size_t missed() const;
};

AuditReport audit_heuristic_failures(const ExperimentSpec& spec, const RuleMatrix& m,
                                     oracle::EnumerationBounds bounds = {});

enum class SweepAxis { fill, dims, t1_pct };

std::string_view axis_name(SweepAxis a);
std::optional<SweepAxis> parse_axis(std::string_view name);

// Percent for fill and t1_pct; a full YardDimensions for dims.
using SweepValue = std::variant<double, YardDimensions>;

struct SweepPoint {
  std::string label;
  double x = 0.0;  // plot abscissa: percent, or capacity for dims
  BatchResult batch;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::fill;
  std::vector<SweepPoint> points;
};

ExperimentSpec apply_sweep_value(const ExperimentSpec& base, SweepAxis axis, const SweepValue& value);
SweepResult sweep(const ExperimentSpec& base, SweepAxis axis, const std::vector<SweepValue>& values,
                  const RuleMatrix& m, BatchOptions options = {});

// Output ----------------------------------------------------------------------

inline constexpr std::string_view kRunCsvHeader =
    "strategy,seed,run,rows,slots,tiers,fill,t1,t2,t3,t4,weighting,status,movements,final_worst,final_sum,"
    "runtime_ms";

enum class OutputFormat { csv, plotdata, svg };
std::optional<OutputFormat> parse_format(std::string_view name);

// In comparison mode the runtime columns are written as 0 so that repeated
// executions are byte-identical.
void write_runs_csv(std::ostream& out, const BatchResult& batch, bool comparison);
void write_summary_csv(std::ostream& out, const BatchResult& batch, bool comparison);
void write_sweep_csv(std::ostream& out, const SweepResult& sweep, bool comparison);
// Columns: x success_rate avg_movements.
void write_plotdata(std::ostream& out, const SweepResult& sweep);
void write_plotdata(std::ostream& out, const BatchResult& batch);
void write_svg(std::ostream& out, const SweepResult& sweep);
void write_svg(std::ostream& out, const BatchResult& batch);

// Writes the files for `format` into dir (created if needed) and returns
// their paths. Throws DomainError for an empty result, Error when a file
// cannot be written.
std::vector<std::filesystem::path> emit_outputs(const std::filesystem::path& dir, const BatchResult& batch,
                                                OutputFormat format, bool comparison);
std::vector<std::filesystem::path> emit_outputs(const std::filesystem::path& dir, const SweepResult& sweep,
                                                OutputFormat format, bool comparison);

// Reads a sweep CSV written by write_sweep_csv back into (axis, x, success,
// avg movements) points; used by the `plot` subcommand.
SweepResult read_sweep_csv(std::string_view text);

}  // namespace hazyard

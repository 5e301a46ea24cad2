#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "relaymatch/allocator.hpp"
#include "relaymatch/oracle.hpp"
#include "relaymatch/reference.hpp"

namespace relaymatch {

struct ExperimentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SweepAxis { None, DddM, DrdM, Xi, NumUes };
enum class RunMode { Proposed, ReferenceDirect, OracleTiny };
enum class OutputFormat { Csv, Json };

SweepAxis parse_axis(const std::string& name);
RunMode parse_mode(const std::string& name);
const char* to_string(RunMode mode);

struct ExperimentSpec {
  NetworkConfig base;
  SweepAxis axis = SweepAxis::None;
  std::vector<double> values;  // ignored for axis None
  std::vector<RunMode> modes = {RunMode::Proposed};
  std::string out_path;  // without extension suffixing; "" = no files
  OutputFormat format = OutputFormat::Csv;
  int oracle_grid = 5;
  std::optional<std::string> channel_load_path;  // replay a dumped channel
  std::optional<std::string> channel_dump_path;
  std::optional<std::string> trace_path;  // per-iteration trace of the first run
};

// One emitted row; the d2d aggregate stays internal (summary input only).
struct ResultRow {
  double sweep_value = 0.0;
  std::string mode;
  int realization = 0;
  double r_avg_bps = 0.0;
  double r_sum_bps = 0.0;
  double rate_gain_pct = std::nan("");  // proposed vs reference, D2D aggregate
  double efficiency = std::nan("");     // proposed vs oracle optimum
  int iterations = 0;
  long messages_matching = 0;
  long messages_x2 = 0;
  double d2d_sum_bps = 0.0;  // not emitted
};

struct SweepPoint {
  double sweep_value = 0.0;
  double mean_r_avg_proposed = 0.0;
  double std_r_avg_proposed = 0.0;
  double gain_pct_aggregate = std::nan("");  // from summed D2D rates
  double mean_efficiency = std::nan("");
};

struct SweepSummary {
  std::vector<SweepPoint> points;
  double crossover_value = std::nan("");  // smallest sweep value with positive gain
  bool single_crossing = false;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  SweepSummary summary;
};

// Applies one sweep value to a copy of the base configuration.
NetworkConfig apply_sweep(const NetworkConfig& base, SweepAxis axis, double value);

// sweep values x realizations x modes; per-realization seeds are independent
// of the sweep value so sweeps compare paired instances.
ExperimentResult run_experiment(const ExperimentSpec& spec);

SweepSummary sweep_summary(const std::vector<ResultRow>& rows);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string rows_to_json(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_json(const std::string& text);
std::string summary_to_csv(const SweepSummary& summary);

// writes <out>.csv/<out>.json plus <out>_summary.csv when a sweep is present
void emit_results(const ExperimentResult& result, const ExperimentSpec& spec);

}  // namespace relaymatch

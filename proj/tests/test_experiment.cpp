#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "relaymatch/experiment.hpp"
#include "relaymatch/metrics.hpp"
#include "relaymatch/rng.hpp"

using namespace relaymatch;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.base.num_relays = 2;
  spec.base.num_cues = 4;
  spec.base.num_d2d_pairs = 2;
  spec.base.rb_count = 6;
  spec.base.xi1 = spec.base.xi2 = spec.base.xi3 = spec.base.xi4 = 0.25;
  spec.base.realizations = 2;
  spec.base.seed = 3;
  return spec;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("csv header matches the documented schema") {
  const auto csv = rows_to_csv({});
  CHECK(csv ==
        "sweep_value,mode,realization,r_avg_bps,r_sum_bps,rate_gain_pct,efficiency,"
        "iterations,messages_matching,messages_x2\n");
}

TEST_CASE("single row renders, gaps stay empty") {
  ResultRow row;
  row.sweep_value = 10;
  row.mode = "proposed";
  row.realization = 0;
  row.r_avg_bps = 1.5e5;
  row.r_sum_bps = 9e5;
  row.iterations = 4;
  row.messages_matching = 21;
  row.messages_x2 = 8;
  const auto csv = rows_to_csv({row});
  CHECK(csv.find("10,proposed,0,150000,900000,,,4,21,8\n") != std::string::npos);
}

TEST_CASE("json round-trips the row set") {
  const auto spec = small_spec();
  const auto result = run_experiment(spec);
  REQUIRE_FALSE(result.rows.empty());
  const auto back = rows_from_json(rows_to_json(result.rows));
  REQUIRE(back.size() == result.rows.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].mode == result.rows[i].mode);
    CHECK(back[i].r_sum_bps == result.rows[i].r_sum_bps);
    CHECK(back[i].iterations == result.rows[i].iterations);
    CHECK((std::isnan(back[i].rate_gain_pct) && std::isnan(result.rows[i].rate_gain_pct)));
  }
}

TEST_CASE("rerun produces byte-identical files") {
  ExperimentSpec spec = small_spec();
  spec.base.realizations = 1;
  spec.out_path = "/tmp/relaymatch_det";
  run_experiment(spec);
  const auto first = slurp("/tmp/relaymatch_det.csv");
  run_experiment(spec);
  CHECK(first == slurp("/tmp/relaymatch_det.csv"));
  CHECK_FALSE(first.empty());
  std::remove("/tmp/relaymatch_det.csv");
}

TEST_CASE("emitted sums match an independent recomputation") {
  ExperimentSpec spec = small_spec();
  spec.base.realizations = 3;
  const auto result = run_experiment(spec);
  for (const auto& row : result.rows) {
    if (row.mode != "proposed") continue;
    const std::uint64_t seed_r = mix_seed(spec.base.seed, 100 + static_cast<std::uint64_t>(row.realization));
    const auto topo = generate_topology(spec.base, seed_r);
    const auto ch = sample_link_gains(topo, spec.base, seed_r);
    const auto run = run_network(spec.base, topo, ch);
    double sum = 0.0;
    for (double r : run.ue_rate_bps) sum += r;
    CHECK(row.r_sum_bps == doctest::Approx(sum).epsilon(1e-9));
    CHECK(row.r_avg_bps ==
          doctest::Approx(sum / spec.base.num_ues()).epsilon(1e-9));
  }
}

TEST_CASE("oracle mode guard fires before any run") {
  ExperimentSpec spec = small_spec();  // 6 UEs, 2 relays
  spec.modes = {RunMode::OracleTiny};
  CHECK_THROWS_AS(run_experiment(spec), ExperimentError);

  spec.base.num_relays = 1;
  spec.base.num_cues = 8;  // still too many UEs
  spec.base.num_d2d_pairs = 1;
  spec.base.rb_count = 4;
  CHECK_THROWS_AS(run_experiment(spec), ExperimentError);
}

TEST_CASE("sweep summary: synthetic rows give the crossover bracket") {
  std::vector<ResultRow> rows;
  auto add = [&](double v, const char* mode, double d2d) {
    ResultRow r;
    r.sweep_value = v;
    r.mode = mode;
    r.realization = 0;
    r.d2d_sum_bps = d2d;
    r.r_avg_bps = d2d;
    rows.push_back(r);
  };
  add(10, "proposed", 50);
  add(10, "reference-direct", 100);  // gain -50%
  add(30, "proposed", 90);
  add(30, "reference-direct", 100);  // gain -10%
  add(50, "proposed", 150);
  add(50, "reference-direct", 100);  // gain +50%
  const auto summary = sweep_summary(rows);
  REQUIRE(summary.points.size() == 3);
  CHECK(summary.points[0].gain_pct_aggregate == doctest::Approx(-50));
  CHECK(summary.crossover_value == doctest::Approx(50));
  CHECK(summary.single_crossing);

  // all-positive gains: crossover at the smallest swept value, no crossing
  rows.clear();
  add(10, "proposed", 120);
  add(10, "reference-direct", 100);
  add(20, "proposed", 150);
  add(20, "reference-direct", 100);
  const auto s2 = sweep_summary(rows);
  CHECK(s2.crossover_value == doctest::Approx(10));
  CHECK_FALSE(s2.single_crossing);
}

TEST_CASE("missing counterpart mode leaves the gain column empty") {
  ExperimentSpec spec = small_spec();
  spec.base.realizations = 1;
  spec.modes = {RunMode::Proposed};
  const auto result = run_experiment(spec);
  REQUIRE(result.rows.size() == 1);
  CHECK(std::isnan(result.rows[0].rate_gain_pct));
}

TEST_CASE("reference mode emits its own rows with the shared schema") {
  ExperimentSpec spec = small_spec();
  spec.base.realizations = 1;
  spec.modes = {RunMode::Proposed, RunMode::ReferenceDirect};
  const auto result = run_experiment(spec);
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[0].mode == "proposed");
  CHECK(result.rows[1].mode == "reference-direct");
  CHECK(result.rows[1].r_sum_bps >= 0.0);
  // the proposed row now carries a gain (possibly nan if the baseline is silent)
  const auto csv = rows_to_csv(result.rows);
  CHECK(csv.find("reference-direct") != std::string::npos);
}

TEST_CASE("channel dump and replay through the experiment layer") {
  ExperimentSpec spec = small_spec();
  spec.base.realizations = 1;
  spec.channel_dump_path = "/tmp/relaymatch_chan.csv";
  const auto a = run_experiment(spec);

  ExperimentSpec replay = small_spec();
  replay.base.realizations = 1;
  replay.channel_load_path = "/tmp/relaymatch_chan.csv";
  const auto b = run_experiment(replay);
  REQUIRE(a.rows.size() == b.rows.size());
  CHECK(a.rows[0].r_sum_bps == doctest::Approx(b.rows[0].r_sum_bps).epsilon(1e-12));
  std::remove("/tmp/relaymatch_chan.csv");

  ExperimentSpec bad = small_spec();
  bad.channel_load_path = "/tmp/relaymatch_chan.csv";  // realizations=2
  CHECK_THROWS_AS(run_experiment(bad), ExperimentError);
}

TEST_CASE("axis and mode parsing") {
  CHECK(parse_axis("d_dd_m") == SweepAxis::DddM);
  CHECK(parse_axis("xi") == SweepAxis::Xi);
  CHECK_THROWS_AS(parse_axis("bogus"), ExperimentError);
  CHECK(parse_mode("reference-direct") == RunMode::ReferenceDirect);
  CHECK_THROWS_AS(parse_mode("bogus"), ExperimentError);
  const auto cfg = apply_sweep(small_spec().base, SweepAxis::Xi, 0.5);
  CHECK(cfg.xi1 == doctest::Approx(0.5));
  CHECK(cfg.xi4 == doctest::Approx(0.5));
  const auto cfg2 = apply_sweep(small_spec().base, SweepAxis::NumUes, 9);
  CHECK(cfg2.num_cues + cfg2.num_d2d_pairs == 9);
}

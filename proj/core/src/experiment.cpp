#include "relaymatch/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "relaymatch/rng.hpp"

namespace relaymatch {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double proposed_sum(const NetworkRun& run) {
  double s = 0.0;
  for (double r : run.ue_rate_bps) s += r;
  return s;
}

double proposed_d2d_sum(const NetworkRun& run, int num_cues) {
  double s = 0.0;
  for (std::size_t u = static_cast<std::size_t>(num_cues); u < run.ue_rate_bps.size(); ++u)
    s += run.ue_rate_bps[u];
  return s;
}

}  // namespace

SweepAxis parse_axis(const std::string& name) {
  if (name == "d_dd_m") return SweepAxis::DddM;
  if (name == "d_rd_m") return SweepAxis::DrdM;
  if (name == "xi") return SweepAxis::Xi;
  if (name == "num_ues") return SweepAxis::NumUes;
  throw ExperimentError("unknown sweep axis: " + name +
                        " (expected d_dd_m, d_rd_m, xi or num_ues)");
}

RunMode parse_mode(const std::string& name) {
  if (name == "proposed") return RunMode::Proposed;
  if (name == "reference-direct") return RunMode::ReferenceDirect;
  if (name == "oracle-on-tiny") return RunMode::OracleTiny;
  throw ExperimentError("unknown mode: " + name +
                        " (expected proposed, reference-direct or oracle-on-tiny)");
}

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Proposed: return "proposed";
    case RunMode::ReferenceDirect: return "reference-direct";
    case RunMode::OracleTiny: return "oracle-on-tiny";
  }
  return "?";
}

NetworkConfig apply_sweep(const NetworkConfig& base, SweepAxis axis, double value) {
  NetworkConfig cfg = base;
  switch (axis) {
    case SweepAxis::None:
      break;
    case SweepAxis::DddM:
      cfg.d_dd_m = value;
      break;
    case SweepAxis::DrdM:
      cfg.d_rd_m = value;
      break;
    case SweepAxis::Xi:
      cfg.xi1 = cfg.xi2 = cfg.xi3 = cfg.xi4 = value;
      break;
    case SweepAxis::NumUes: {
      const int total = std::max(2, static_cast<int>(value));
      const double cue_share =
          static_cast<double>(base.num_cues) / std::max(1, base.num_cues + base.num_d2d_pairs);
      cfg.num_cues = std::max(1, static_cast<int>(std::lround(total * cue_share)));
      cfg.num_d2d_pairs = std::max(1, total - cfg.num_cues);
      break;
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.base.validate();
  std::vector<double> values = spec.values;
  if (spec.axis == SweepAxis::None) values.assign(1, 0.0);
  if (values.empty()) throw ExperimentError("sweep axis given but no values");

  const bool want_proposed =
      std::find(spec.modes.begin(), spec.modes.end(), RunMode::Proposed) != spec.modes.end();
  const bool want_reference = std::find(spec.modes.begin(), spec.modes.end(),
                                        RunMode::ReferenceDirect) != spec.modes.end();
  const bool want_oracle =
      std::find(spec.modes.begin(), spec.modes.end(), RunMode::OracleTiny) != spec.modes.end();

  // guard before any run: the exhaustive mode only fits desk-scale instances
  if (want_oracle) {
    for (double v : values) {
      const NetworkConfig cfg = apply_sweep(spec.base, spec.axis, v);
      if (cfg.num_relays != 1 || cfg.num_ues() > 4 || cfg.rb_count > 4)
        throw ExperimentError(
            "oracle-on-tiny guard: needs num_relays=1, num_ues<=4, rb_count<=4");
    }
  }
  if (spec.channel_load_path &&
      (spec.axis != SweepAxis::None || spec.base.realizations != 1))
    throw ExperimentError("channel replay needs realizations=1 and no sweep");

  ExperimentResult result;
  bool dumped = false;
  bool traced = false;

  for (double value : values) {
    const NetworkConfig cfg = apply_sweep(spec.base, spec.axis, value);
    for (int r = 0; r < cfg.realizations; ++r) {
      // seeds do not depend on the sweep value: paired comparisons across values
      const std::uint64_t seed_r = mix_seed(cfg.seed, 100 + static_cast<std::uint64_t>(r));
      const Topology topo = generate_topology(cfg, seed_r);
      ChannelState ch;
      if (spec.channel_load_path) {
        std::ifstream in(*spec.channel_load_path);
        if (!in) throw ExperimentError("cannot open channel dump: " + *spec.channel_load_path);
        std::stringstream buf;
        buf << in.rdbuf();
        ch = load_channel_csv(cfg, topo, buf.str());
      } else {
        ch = sample_link_gains(topo, cfg, seed_r);
      }
      if (spec.channel_dump_path && !dumped) {
        std::ofstream out(*spec.channel_dump_path);
        if (!out) throw ExperimentError("cannot write channel dump: " + *spec.channel_dump_path);
        out << dump_channel_csv(ch);
        dumped = true;
      }

      std::optional<NetworkRun> prop;
      std::optional<ReferenceRun> ref;
      std::optional<OracleOptimum> opt;
      if (want_proposed || want_oracle) prop = run_network(cfg, topo, ch);
      if (prop && spec.trace_path && !traced) {
        std::ofstream out(*spec.trace_path);
        if (!out) throw ExperimentError("cannot write trace: " + *spec.trace_path);
        out << trace_to_csv(*prop);
        traced = true;
      }
      if (want_reference) ref = run_reference(cfg, topo, ch);
      if (want_oracle) {
        OracleInstance inst;
        inst.ch = &ch;
        inst.background = NetworkAllocation::zero(cfg.num_ues(), cfg.rb_count);
        inst.relay = 0;
        inst.grid_levels = spec.oracle_grid;
        inst.enforce_qos = false;  // capacity comparison; minimum rates reported, not gating
        opt = optimal_rate(inst, RateMode::Robust);
      }

      if (want_proposed || want_oracle) {
        ResultRow row;
        row.sweep_value = value;
        row.mode = to_string(RunMode::Proposed);
        row.realization = r;
        row.r_sum_bps = proposed_sum(*prop);
        row.r_avg_bps = row.r_sum_bps / cfg.num_ues();
        row.d2d_sum_bps = proposed_d2d_sum(*prop, cfg.num_cues);
        row.iterations = prop->iterations;
        row.messages_matching = prop->total_matching_messages;
        row.messages_x2 = prop->total_x2_messages;
        if (ref) {
          const double ref_d2d = ref->d2d_sum_bps(cfg.num_cues);
          if (ref_d2d > 0.0)
            row.rate_gain_pct = (row.d2d_sum_bps - ref_d2d) / ref_d2d * 100.0;
        }
        if (opt && opt->feasible && opt->sum_rate_bps > 0.0)
          row.efficiency = row.r_sum_bps / opt->sum_rate_bps;
        result.rows.push_back(std::move(row));
      }
      if (ref) {
        ResultRow row;
        row.sweep_value = value;
        row.mode = to_string(RunMode::ReferenceDirect);
        row.realization = r;
        for (double v : ref->ue_rate_bps) row.r_sum_bps += v;
        row.r_avg_bps = row.r_sum_bps / cfg.num_ues();
        row.d2d_sum_bps = ref->d2d_sum_bps(cfg.num_cues);
        row.iterations = ref->cue_run.iterations;
        row.messages_matching = ref->cue_run.total_matching_messages;
        row.messages_x2 = ref->cue_run.total_x2_messages;
        result.rows.push_back(std::move(row));
      }
      if (opt) {
        ResultRow row;
        row.sweep_value = value;
        row.mode = to_string(RunMode::OracleTiny);
        row.realization = r;
        row.r_sum_bps = opt->feasible ? opt->sum_rate_bps : 0.0;
        row.r_avg_bps = row.r_sum_bps / cfg.num_ues();
        result.rows.push_back(std::move(row));
      }
    }
  }

  if (spec.axis != SweepAxis::None) result.summary = sweep_summary(result.rows);
  if (!spec.out_path.empty()) emit_results(result, spec);
  return result;
}

SweepSummary sweep_summary(const std::vector<ResultRow>& rows) {
  SweepSummary summary;
  std::vector<double> order;
  for (const auto& row : rows)
    if (std::find(order.begin(), order.end(), row.sweep_value) == order.end())
      order.push_back(row.sweep_value);

  for (double v : order) {
    SweepPoint pt;
    pt.sweep_value = v;
    double prop_d2d = 0.0, ref_d2d = 0.0, eff_sum = 0.0;
    int prop_n = 0, ref_n = 0, eff_n = 0;
    double mean = 0.0, m2 = 0.0;
    for (const auto& row : rows) {
      if (row.sweep_value != v) continue;
      if (row.mode == "proposed") {
        ++prop_n;
        prop_d2d += row.d2d_sum_bps;
        const double delta = row.r_avg_bps - mean;
        mean += delta / prop_n;
        m2 += delta * (row.r_avg_bps - mean);
        if (!std::isnan(row.efficiency)) {
          eff_sum += row.efficiency;
          ++eff_n;
        }
      } else if (row.mode == "reference-direct") {
        ++ref_n;
        ref_d2d += row.d2d_sum_bps;
      }
    }
    pt.mean_r_avg_proposed = prop_n ? mean : std::nan("");
    pt.std_r_avg_proposed = prop_n > 1 ? std::sqrt(m2 / (prop_n - 1)) : 0.0;
    if (prop_n && ref_n && ref_d2d > 0.0)
      pt.gain_pct_aggregate = (prop_d2d - ref_d2d) / ref_d2d * 100.0;
    if (eff_n) pt.mean_efficiency = eff_sum / eff_n;
    summary.points.push_back(pt);
  }

  // crossover: first value whose aggregate gain is positive; single crossing
  // means one minus-to-plus flip and none back
  int flips_up = 0, flips_down = 0;
  double prev = std::nan("");
  for (const auto& pt : summary.points) {
    const double g = pt.gain_pct_aggregate;
    if (std::isnan(g)) continue;
    if (std::isnan(summary.crossover_value) && g > 0.0) summary.crossover_value = pt.sweep_value;
    if (!std::isnan(prev)) {
      if (prev <= 0.0 && g > 0.0) ++flips_up;
      if (prev > 0.0 && g <= 0.0) ++flips_down;
    }
    prev = g;
  }
  const SweepPoint* first = nullptr;
  const SweepPoint* last = nullptr;
  for (const auto& pt : summary.points)
    if (!std::isnan(pt.gain_pct_aggregate)) {
      if (!first) first = &pt;
      last = &pt;
    }
  summary.single_crossing = first && last && first->gain_pct_aggregate < 0.0 &&
                            last->gain_pct_aggregate > 0.0 && flips_up == 1 && flips_down == 0;
  return summary;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "sweep_value,mode,realization,r_avg_bps,r_sum_bps,rate_gain_pct,efficiency,"
         "iterations,messages_matching,messages_x2\n";
  for (const auto& r : rows) {
    out << fmt(r.sweep_value) << ',' << r.mode << ',' << r.realization << ','
        << fmt(r.r_avg_bps) << ',' << fmt(r.r_sum_bps) << ',' << fmt(r.rate_gain_pct) << ','
        << fmt(r.efficiency) << ',' << r.iterations << ',' << r.messages_matching << ','
        << r.messages_x2 << '\n';
  }
  return out.str();
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["sweep_value"] = r.sweep_value;
    o["mode"] = r.mode;
    o["realization"] = r.realization;
    o["r_avg_bps"] = r.r_avg_bps;
    o["r_sum_bps"] = r.r_sum_bps;
    if (std::isnan(r.rate_gain_pct))
      o["rate_gain_pct"] = nullptr;
    else
      o["rate_gain_pct"] = r.rate_gain_pct;
    if (std::isnan(r.efficiency))
      o["efficiency"] = nullptr;
    else
      o["efficiency"] = r.efficiency;
    o["iterations"] = r.iterations;
    o["messages_matching"] = r.messages_matching;
    o["messages_x2"] = r.messages_x2;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::vector<ResultRow> rows_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<ResultRow> rows;
  for (const auto& o : doc) {
    ResultRow r;
    r.sweep_value = o.at("sweep_value").get<double>();
    r.mode = o.at("mode").get<std::string>();
    r.realization = o.at("realization").get<int>();
    r.r_avg_bps = o.at("r_avg_bps").get<double>();
    r.r_sum_bps = o.at("r_sum_bps").get<double>();
    r.rate_gain_pct =
        o.at("rate_gain_pct").is_null() ? std::nan("") : o.at("rate_gain_pct").get<double>();
    r.efficiency = o.at("efficiency").is_null() ? std::nan("") : o.at("efficiency").get<double>();
    r.iterations = o.at("iterations").get<int>();
    r.messages_matching = o.at("messages_matching").get<long>();
    r.messages_x2 = o.at("messages_x2").get<long>();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string summary_to_csv(const SweepSummary& summary) {
  std::ostringstream out;
  out << "sweep_value,mean_r_avg_proposed_bps,std_r_avg_proposed_bps,rate_gain_pct_aggregate,"
         "mean_efficiency\n";
  for (const auto& pt : summary.points)
    out << fmt(pt.sweep_value) << ',' << fmt(pt.mean_r_avg_proposed) << ','
        << fmt(pt.std_r_avg_proposed) << ',' << fmt(pt.gain_pct_aggregate) << ','
        << fmt(pt.mean_efficiency) << '\n';
  out << "crossover_value," << fmt(summary.crossover_value) << ",,,\n";
  out << "single_crossing," << (summary.single_crossing ? 1 : 0) << ",,,\n";
  return out.str();
}

void emit_results(const ExperimentResult& result, const ExperimentSpec& spec) {
  const std::string main_path =
      spec.out_path + (spec.format == OutputFormat::Csv ? ".csv" : ".json");
  std::ofstream out(main_path);
  if (!out) throw ExperimentError("cannot write results: " + main_path);
  out << (spec.format == OutputFormat::Csv ? rows_to_csv(result.rows)
                                           : rows_to_json(result.rows));
  if (!out) throw ExperimentError("write failed: " + main_path);

  if (spec.axis != SweepAxis::None) {
    const std::string sum_path = spec.out_path + "_summary.csv";
    std::ofstream sum(sum_path);
    if (!sum) throw ExperimentError("cannot write summary: " + sum_path);
    sum << summary_to_csv(result.summary);
    if (!sum) throw ExperimentError("write failed: " + sum_path);
  }
}

}  // namespace relaymatch

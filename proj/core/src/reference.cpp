#include "relaymatch/reference.hpp"

#include <algorithm>
#include <cmath>

namespace relaymatch {

namespace {

constexpr double kLog2 = 0.69314718055994530941723212145818;

// Worst-case two-hop CUE rate with the extra same-relay D2D interference the
// sharing introduces (the cross-relay part matches the standard evaluator,
// which skips co-relay transmitters by design).
double cue_rate_shared(const ChannelState& ch, const NetworkAllocation& alloc, int cue, int n) {
  const NetworkConfig& cfg = ch.cfg();
  const int lu = ch.serving_relay(cue);
  const double p = alloc.p1(cue, n);
  if (p <= 0.0) return 0.0;
  const double h = ch.hop1_gain(cue, n);
  double nominal = 0.0, power_sq = 0.0, same_relay = 0.0;
  for (int uj = 0; uj < ch.num_ues(); ++uj) {
    if (uj == cue) continue;
    const double s = alloc.p1(uj, n);
    if (s <= 0.0) continue;
    if (ch.serving_relay(uj) == lu) {
      same_relay += s * ch.ue_to_relay(uj, lu, n);
    } else {
      nominal += s * ch.ue_to_relay(uj, lu, n);
      power_sq += s * s;
    }
  }
  const double denom = nominal + same_relay +
                       h * ch.xi1_radius(cue, n) * std::sqrt(power_sq) + cfg.sigma2();
  return 0.5 * cfg.rb_bandwidth_hz * std::log1p(p * h / denom) / kLog2;
}

double cue_total_shared(const ChannelState& ch, const NetworkAllocation& alloc, int cue) {
  double total = 0.0;
  for (int n = 0; n < ch.num_rbs(); ++n)
    if (alloc.assigned(cue, n)) total += cue_rate_shared(ch, alloc, cue, n);
  return total;
}

double d2d_total_direct(const ChannelState& ch, const NetworkAllocation& alloc, int tx) {
  RateContext ctx(ch, alloc);
  double total = 0.0;
  for (int n = 0; n < ch.num_rbs(); ++n)
    if (alloc.assigned(tx, n)) total += direct_d2d_rate(ctx, tx, n);
  return total;
}

// how much of the host's per-RB rate the sharing may consume
constexpr double kHostSlack = 1.04;

// Largest D2D transmit power on RB n that still leaves the host CUE at
// r_free / kHostSlack, obtained by inverting the two-hop rate formula for the
// extra interference the relay may absorb.
double max_share_power(const ChannelState& ch, const NetworkAllocation& alloc, int cue, int tx,
                       int n) {
  const double p_c = alloc.p1(cue, n);
  if (p_c <= 0.0) return 0.0;
  const int l = ch.serving_relay(cue);
  const double h = ch.hop1_gain(cue, n);
  const double r_free = cue_rate_shared(ch, alloc, cue, n);
  if (r_free <= 0.0) return 0.0;
  const double r_min = r_free / kHostSlack;
  const double b = ch.cfg().rb_bandwidth_hz;
  const double sinr_min = std::exp2(2.0 * r_min / b) - 1.0;
  const double denom_now = p_c * h / (std::exp2(2.0 * r_free / b) - 1.0);
  const double denom_max = p_c * h / sinr_min;
  const double g = ch.ue_to_relay(tx, l, n);
  return std::max(0.0, (denom_max - denom_now) / g);
}

}  // namespace

ReferenceRun run_reference(const NetworkConfig& cfg, const Topology& topo,
                           const ChannelState& ch) {
  // The conventional baseline is blind to the uncertainty model: CUEs are
  // scheduled and evaluated with nominal gains, so the same seed yields the
  // same baseline whatever the configured bounds.
  NetworkConfig cfg_ref = cfg;
  cfg_ref.xi1 = cfg_ref.xi2 = cfg_ref.xi3 = cfg_ref.xi4 = 0.0;

  // schedule CUEs alone: D2D traffic never enters the two-hop allocation
  std::vector<std::vector<int>> cue_only(topo.relay_ues.size());
  for (std::size_t l = 0; l < topo.relay_ues.size(); ++l)
    for (int u : topo.relay_ues[l])
      if (!topo.is_d2d(u)) cue_only[l].push_back(u);
  const ChannelState ch_cue = ch.with_config(cfg_ref).with_associations(cue_only);

  ReferenceRun run;
  run.cue_run = run_network(cfg_ref, ch_cue.topo(), ch_cue);
  run.alloc = run.cue_run.alloc;
  run.host_cue.assign(static_cast<std::size_t>(cfg.num_d2d_pairs), -1);

  // greedy hosting, strongest direct link first
  std::vector<int> order(static_cast<std::size_t>(cfg.num_d2d_pairs));
  for (int d = 0; d < cfg.num_d2d_pairs; ++d) order[static_cast<std::size_t>(d)] = d;
  std::vector<double> mean_gain(order.size(), 0.0);
  for (int d = 0; d < cfg.num_d2d_pairs; ++d) {
    const int tx = cfg.num_cues + d;
    for (int n = 0; n < cfg.rb_count; ++n)
      mean_gain[static_cast<std::size_t>(d)] += ch.direct_d2d_gain(tx, n);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return mean_gain[static_cast<std::size_t>(a)] > mean_gain[static_cast<std::size_t>(b)]; });

  std::vector<std::uint8_t> hosting(static_cast<std::size_t>(cfg.num_ues()), 0);
  for (int d : order) {
    const int tx = cfg.num_cues + d;
    const int ld = topo.ues[static_cast<std::size_t>(tx)].serving_relay;
    int best_cue = -1;
    double best_rate = 0.0;
    std::vector<double> best_power;

    for (int c = 0; c < cfg.num_cues; ++c) {
      if (topo.ues[static_cast<std::size_t>(c)].serving_relay != ld) continue;
      if (hosting[static_cast<std::size_t>(c)]) continue;
      const int shared = run.alloc.rbs_held(c);
      if (shared == 0) continue;

      // tentative overlay: on each host RB the pair transmits as much as the
      // host's rate slack allows, inside its own power budget
      const double budget = cfg.p_max_ue_w() / shared;
      for (int n = 0; n < cfg.rb_count; ++n) {
        const bool on = run.alloc.assigned(c, n);
        const double p = on ? std::min(budget, max_share_power(ch_cue, run.alloc, c, tx, n)) : 0.0;
        run.alloc.x[static_cast<std::size_t>(tx)][static_cast<std::size_t>(n)] = on && p > 0.0 ? 1 : 0;
        run.alloc.p_cand[static_cast<std::size_t>(tx)][static_cast<std::size_t>(n)] = p;
      }
      const double d2d_rate = d2d_total_direct(ch, run.alloc, tx);
      const double cue_rate = cue_total_shared(ch_cue, run.alloc, c);
      if (d2d_rate >= cfg.q_min_d2d_bps && cue_rate >= cfg.q_min_cue_bps &&
          d2d_rate > best_rate) {
        best_rate = d2d_rate;
        best_cue = c;
        best_power = run.alloc.p_cand[static_cast<std::size_t>(tx)];
      }
      // roll back the tentative overlay
      std::fill(run.alloc.x[static_cast<std::size_t>(tx)].begin(), run.alloc.x[static_cast<std::size_t>(tx)].end(), 0);
      std::fill(run.alloc.p_cand[static_cast<std::size_t>(tx)].begin(), run.alloc.p_cand[static_cast<std::size_t>(tx)].end(), 0.0);
    }

    if (best_cue >= 0) {
      run.host_cue[static_cast<std::size_t>(d)] = best_cue;
      hosting[static_cast<std::size_t>(best_cue)] = 1;
      for (int n = 0; n < cfg.rb_count; ++n)
        run.alloc.x[static_cast<std::size_t>(tx)][static_cast<std::size_t>(n)] =
            best_power[static_cast<std::size_t>(n)] > 0.0 ? 1 : 0;
      run.alloc.p_cand[static_cast<std::size_t>(tx)] = best_power;
    }
  }

  run.ue_rate_bps.assign(static_cast<std::size_t>(cfg.num_ues()), 0.0);
  for (int u = 0; u < cfg.num_ues(); ++u) {
    if (topo.is_d2d(u))
      run.ue_rate_bps[static_cast<std::size_t>(u)] = d2d_total_direct(ch, run.alloc, u);
    else
      run.ue_rate_bps[static_cast<std::size_t>(u)] = cue_total_shared(ch_cue, run.alloc, u);
  }
  return run;
}

}  // namespace relaymatch

#include "relaymatch/allocator.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace relaymatch {

UtilityMatrix build_utility_matrix(const RateContext& ctx, int relay) {
  const auto& ues = ctx.topo->relay_ues[static_cast<std::size_t>(relay)];
  UtilityMatrix util(static_cast<int>(ues.size()), ctx.cfg->rb_count);
  for (int i = 0; i < util.num_ues; ++i) {
    const int u = ues[static_cast<std::size_t>(i)];
    for (int n = 0; n < util.num_rbs; ++n) {
      const double p = ctx.alloc->p_cand[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)];
      util.at(i, n) = robust_rb_rate(ctx, u, n, p);
    }
  }
  return util;
}

RelayIterationRecord relay_round(const ChannelState& ch, const NetworkAllocation& global,
                                 int relay, NetworkAllocation& next) {
  const NetworkConfig& cfg = ch.cfg();
  const Topology& topo = ch.topo();
  const auto& ues = topo.relay_ues[static_cast<std::size_t>(relay)];
  const int N = cfg.rb_count;

  RelayIterationRecord rec;

  // rates every decision in this round is based on: candidate powers from the
  // previous iteration, cross-relay interference from the last exchange
  RateContext prev_ctx(ch, global);
  rec.utility = build_utility_matrix(prev_ctx, relay);

  std::vector<double> q_min(ues.size());
  for (std::size_t i = 0; i < ues.size(); ++i)
    q_min[i] = topo.is_d2d(ues[i]) ? cfg.q_min_d2d_bps : cfg.q_min_cue_bps;
  rec.quota = compute_quota(rec.utility, q_min);

  const PreferenceProfiles profiles = build_preferences(rec.utility);
  AllocationResult alloc_res = allocate_rbs(profiles, rec.quota);
  rec.matching = std::move(alloc_res.matching);
  rec.stats = std::move(alloc_res.stats);

  // stage the new assignment on a private copy of the snapshot: other relays'
  // same-iteration updates stay invisible until the exchange
  NetworkAllocation work = global;
  for (std::size_t i = 0; i < ues.size(); ++i) {
    const int u = ues[i];
    auto& xu = work.x[static_cast<std::size_t>(u)];
    std::fill(xu.begin(), xu.end(), 0);
    work.quota[static_cast<std::size_t>(u)] = rec.quota.kappa[i];
    work.qos_capped[static_cast<std::size_t>(u)] = rec.quota.capped[i];
  }
  for (int n = 0; n < N; ++n) {
    const int local = rec.matching.rb_owner[static_cast<std::size_t>(n)];
    if (local >= 0)
      work.x[static_cast<std::size_t>(ues[static_cast<std::size_t>(local)])][static_cast<std::size_t>(n)] = 1;
  }

  // power control against the staged assignment; UEs left without RBs keep
  // their candidate powers
  RateContext work_ctx(ch, work);
  for (std::size_t i = 0; i < ues.size(); ++i) {
    const int u = ues[i];
    if (work.rbs_held(u) == 0) continue;
    // the minimum rate is split over the new assignment in proportion to the
    // per-RB rates before this round; an even split would converge all
    // assigned entries onto the same value and erase the preference order
    double rate_sum = 0.0;
    int assigned_n = 0;
    for (int n = 0; n < N; ++n)
      if (work.assigned(u, n)) {
        rate_sum += rec.utility.at(static_cast<int>(i), n);
        ++assigned_n;
      }
    double assigned_sum = 0.0;
    for (int n = 0; n < N; ++n) {
      if (!work.assigned(u, n)) continue;
      const double prev_rate = rec.utility.at(static_cast<int>(i), n);
      const double share = rate_sum > 0.0 ? prev_rate / rate_sum : 1.0 / assigned_n;
      const double prev_p = global.p_cand[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)];
      const double p =
          update_power(work_ctx, u, n, prev_rate / cfg.rb_bandwidth_hz, prev_p, share);
      work.p_cand[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] = p;
      assigned_sum += p;
    }
    // off-assignment candidates probe at the UE's mean transmit power, clamped
    // to the RB's own ceilings, so rows rank RBs by channel quality at a
    // comparable power instead of chasing per-RB targets
    const double probe = assigned_sum / assigned_n;
    for (int n = 0; n < N; ++n) {
      if (work.assigned(u, n)) continue;
      const PowerCaps caps = power_caps(work_ctx, u, n);
      work.p_cand[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] =
          std::min(probe, std::min(caps.p_hat_max, caps.varpi));
    }
  }

  // refreshed utility and achieved rate at the staged allocation
  rec.utility = build_utility_matrix(work_ctx, relay);
  rec.sum_rate_bps = 0.0;
  for (std::size_t i = 0; i < ues.size(); ++i)
    for (int n = 0; n < N; ++n)
      if (work.assigned(ues[i], n)) rec.sum_rate_bps += rec.utility.at(static_cast<int>(i), n);

  // multicast: copy this relay's rows into the next snapshot
  for (int u : ues) {
    next.x[static_cast<std::size_t>(u)] = work.x[static_cast<std::size_t>(u)];
    next.p_cand[static_cast<std::size_t>(u)] = work.p_cand[static_cast<std::size_t>(u)];
    next.quota[static_cast<std::size_t>(u)] = work.quota[static_cast<std::size_t>(u)];
    next.qos_capped[static_cast<std::size_t>(u)] = work.qos_capped[static_cast<std::size_t>(u)];
  }
  return rec;
}

NetworkRun run_network(const NetworkConfig& cfg, const Topology& topo, const ChannelState& ch) {
  const int U = topo.num_ues();
  const int N = cfg.rb_count;
  const int L = topo.num_relays();

  NetworkRun run;
  run.alloc = NetworkAllocation::zero(U, N);
  for (int u = 0; u < U; ++u)
    for (int n = 0; n < N; ++n)
      run.alloc.p_cand[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] =
          cfg.p_max_ue_w() / N;

  std::vector<double> prev_rate(static_cast<std::size_t>(L), 0.0);
  bool have_prev = false;

  for (int t = 1; t <= cfg.t_max; ++t) {
    NetworkAllocation next = run.alloc;
    IterationRecord iter;
    iter.t = t;
    iter.relays.reserve(static_cast<std::size_t>(L));

    double network_rate = 0.0;
    bool all_small = have_prev;
    for (int l = 0; l < L; ++l) {
      RelayIterationRecord rec = relay_round(ch, run.alloc, l, next);
      network_rate += rec.sum_rate_bps;
      run.total_matching_messages += rec.stats.proposals;
      run.total_x2_messages += 1;
      run.trace.push_back({t, l, rec.sum_rate_bps, rec.stats.proposals, 1});
      if (have_prev &&
          std::fabs(rec.sum_rate_bps - prev_rate[static_cast<std::size_t>(l)]) >= cfg.epsilon)
        all_small = false;
      prev_rate[static_cast<std::size_t>(l)] = rec.sum_rate_bps;
      iter.relays.push_back(std::move(rec));
    }

    run.alloc = std::move(next);  // X2 barrier: everyone sees iteration t from t+1 on
    run.history.push_back(std::move(iter));
    run.network_rate_trace.push_back(network_rate);
    run.iterations = t;
    have_prev = true;
    if (all_small) {
      run.converged = true;
      break;
    }
  }

  RateContext final_ctx(ch, run.alloc);
  run.ue_rate_bps.resize(static_cast<std::size_t>(U));
  for (int u = 0; u < U; ++u)
    run.ue_rate_bps[static_cast<std::size_t>(u)] = ue_total_rate(final_ctx, RateMode::Robust, u);
  return run;
}

std::string trace_to_csv(const NetworkRun& run) {
  std::ostringstream out;
  out << "iteration,relay,sum_rate_bps,messages_matching,messages_x2\n";
  char buf[32];
  for (const auto& row : run.trace) {
    std::snprintf(buf, sizeof(buf), "%.10g", row.sum_rate_bps);
    out << row.iteration << ',' << row.relay << ',' << buf << ',' << row.messages_matching
        << ',' << row.messages_x2 << '\n';
  }
  return out.str();
}

}  // namespace relaymatch

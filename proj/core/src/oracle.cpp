#include "relaymatch/oracle.hpp"

#include <cmath>

#include "relaymatch/power.hpp"

namespace relaymatch {

int OracleInstance::num_ues() const {
  return static_cast<int>(ch->topo().relay_ues[static_cast<std::size_t>(relay)].size());
}

void OracleInstance::validate() const {
  if (!ch) throw OracleError("oracle instance has no channel");
  const int U = num_ues();
  const int N = num_rbs();
  if (U > 4) throw OracleError("oracle guard: more than 4 UEs");
  if (N > 4) throw OracleError("oracle guard: more than 4 RBs");
  if (grid_levels < 1 || grid_levels > 5) throw OracleError("oracle guard: grid levels outside 1..5");
  double states = 1.0;
  for (int n = 0; n < N; ++n) states *= 1.0 + static_cast<double>(U) * grid_levels;
  if (states > 1e7) throw OracleError("oracle guard: candidate count exceeds 1e7");
}

void enumerate_allocations(const OracleInstance& inst, RateMode mode,
                           const std::function<void(const OracleCandidate&)>& visit) {
  inst.validate();
  const ChannelState& ch = *inst.ch;
  const NetworkConfig& cfg = ch.cfg();
  const auto& ues = ch.topo().relay_ues[static_cast<std::size_t>(inst.relay)];
  const int U = inst.num_ues();
  const int N = inst.num_rbs();
  const int G = inst.grid_levels;

  std::vector<int> owner(static_cast<std::size_t>(N), -1);  // -1 .. U-1, odometer
  NetworkAllocation work = inst.background;

  auto reset_relay_rows = [&]() {
    for (int u : ues) {
      std::fill(work.x[static_cast<std::size_t>(u)].begin(), work.x[static_cast<std::size_t>(u)].end(), 0);
      std::fill(work.p_cand[static_cast<std::size_t>(u)].begin(), work.p_cand[static_cast<std::size_t>(u)].end(), 0.0);
    }
  };

  while (true) {
    reset_relay_rows();
    std::vector<std::pair<int, int>> assigned;  // (local ue, rb)
    for (int n = 0; n < N; ++n)
      if (owner[static_cast<std::size_t>(n)] >= 0) {
        assigned.emplace_back(owner[static_cast<std::size_t>(n)], n);
        work.x[static_cast<std::size_t>(ues[static_cast<std::size_t>(owner[static_cast<std::size_t>(n)])])]
              [static_cast<std::size_t>(n)] = 1;
      }

    // per-pair grid under this pattern's caps
    RateContext cap_ctx(ch, work);
    std::vector<std::vector<double>> grids(assigned.size());
    for (std::size_t k = 0; k < assigned.size(); ++k) {
      const int u = ues[static_cast<std::size_t>(assigned[k].first)];
      const PowerCaps caps = power_caps(cap_ctx, u, assigned[k].second);
      double cap = caps.valid ? std::min(caps.p_hat_max, caps.varpi) : 0.0;
      if (!std::isfinite(cap)) cap = caps.p_hat_max;
      auto& g = grids[k];
      if (cap <= 0.0) {
        g.assign(1, 0.0);
      } else if (G == 1) {
        g.assign(1, cap);
      } else {
        const double lo = std::log(cap / 100.0), hi = std::log(cap);
        for (int i = 0; i < G; ++i) g.push_back(std::exp(lo + (hi - lo) * i / (G - 1)));
      }
    }

    std::vector<std::size_t> level(assigned.size(), 0);
    while (true) {
      for (std::size_t k = 0; k < assigned.size(); ++k) {
        const int u = ues[static_cast<std::size_t>(assigned[k].first)];
        work.p_cand[static_cast<std::size_t>(u)][static_cast<std::size_t>(assigned[k].second)] =
            grids[k][level[k]];
      }
      RateContext ctx(ch, work);
      FeasibilityReport rep = check_constraints(ctx, mode);
      bool ok = true;
      for (const auto& c : rep.checks) {
        if (!inst.enforce_qos && c.family == ConstraintFamily::QosRate) continue;
        if (!c.pass) {
          ok = false;
          break;
        }
      }
      double sum = 0.0;
      for (int u : ues) sum += ue_total_rate(ctx, mode, u);
      visit({owner, work, sum, ok});

      // advance the power odometer
      std::size_t k = 0;
      while (k < level.size() && ++level[k] == grids[k].size()) level[k++] = 0;
      if (k == level.size()) break;
    }

    // advance the pattern odometer
    int n = 0;
    while (n < N && ++owner[static_cast<std::size_t>(n)] == U) {
      owner[static_cast<std::size_t>(n)] = -1;
      ++n;
    }
    if (n == N) break;
  }
}

OracleOptimum optimal_rate(const OracleInstance& inst, RateMode mode) {
  OracleOptimum best;
  enumerate_allocations(inst, mode, [&](const OracleCandidate& cand) {
    ++best.candidates;
    if (!cand.feasible) return;
    ++best.feasible_candidates;
    if (!best.feasible || cand.sum_rate_bps > best.sum_rate_bps) {
      best.feasible = true;
      best.sum_rate_bps = cand.sum_rate_bps;
      best.best = cand.alloc;
    }
  });
  return best;
}

void enumerate_matchings(int num_ues, int num_rbs, const Quota& quota,
                         const std::function<void(const Matching&)>& visit) {
  if (num_ues > 5 || num_rbs > 5) throw OracleError("matching enumeration guard: beyond 5x5");
  Matching m;
  m.rb_owner.assign(static_cast<std::size_t>(num_rbs), -1);
  m.ue_rbs.assign(static_cast<std::size_t>(num_ues), {});
  std::vector<int> load(static_cast<std::size_t>(num_ues), 0);

  std::function<void(int)> rec = [&](int n) {
    if (n == num_rbs) {
      visit(m);
      return;
    }
    rec(n + 1);  // leave unmatched
    for (int u = 0; u < num_ues; ++u) {
      if (load[static_cast<std::size_t>(u)] >= quota.kappa[static_cast<std::size_t>(u)]) continue;
      m.rb_owner[static_cast<std::size_t>(n)] = u;
      m.ue_rbs[static_cast<std::size_t>(u)].push_back(n);
      ++load[static_cast<std::size_t>(u)];
      rec(n + 1);
      --load[static_cast<std::size_t>(u)];
      m.ue_rbs[static_cast<std::size_t>(u)].pop_back();
      m.rb_owner[static_cast<std::size_t>(n)] = -1;
    }
  };
  rec(0);
}

std::vector<Matching> stable_set(const PreferenceProfiles& profiles, const Quota& quota) {
  std::vector<Matching> out;
  enumerate_matchings(profiles.num_ues(), profiles.num_rbs(), quota, [&](const Matching& m) {
    if (verify_stable(m, profiles, quota).stable()) out.push_back(m);
  });
  return out;
}

}  // namespace relaymatch

#include "relaymatch/rates.hpp"

#include <cmath>

namespace relaymatch {

namespace {

constexpr double kLog2 = 0.69314718055994530941723212145818;

double log2_1p(double x) { return std::log1p(x) / kLog2; }

// hop-1 interference at ue's serving relay from cross-relay transmitters,
// perturbation applied through the normalized-gain deviation
double hop1_interference(const RateContext& ctx, int ue, int rb) {
  const ChannelState& ch = *ctx.ch;
  const int lu = ch.serving_relay(ue);
  const double h = ch.hop1_gain(ue, rb);
  double acc = 0.0;
  for (int uj = 0; uj < ch.num_ues(); ++uj) {
    if (ch.serving_relay(uj) == lu) continue;
    const double s = ctx.alloc->p1(uj, rb);
    if (s <= 0.0) continue;
    double g = ch.ue_to_relay(uj, lu, rb);
    if (ctx.perturb) g += h * ctx.perturb->df(ue, uj, rb);
    acc += s * g;
  }
  return acc;
}

}  // namespace

double unit_sinr(const RateContext& ctx, int ue, int rb, int hop) {
  const ChannelState& ch = *ctx.ch;
  const NetworkConfig& cfg = *ctx.cfg;
  const double sigma2 = cfg.sigma2();
  if (hop == 1) {
    return ch.hop1_gain(ue, rb) / (hop1_interference(ctx, ue, rb) + sigma2);
  }
  const int lu = ch.serving_relay(ue);
  double interference = 0.0;
  if (!ctx.topo->is_d2d(ue)) {
    // eNB is the victim; only relays forwarding D2D traffic collide (relay ->
    // eNB transmissions are scheduled orthogonally)
    for (int j = 0; j < ch.num_relays(); ++j) {
      if (j == lu) continue;
      for (int uj : ctx.topo->relay_ues[static_cast<std::size_t>(j)]) {
        if (!ctx.topo->is_d2d(uj)) continue;
        const double s = ctx.alloc->p1(uj, rb);
        if (s <= 0.0) continue;
        interference += ch.hop_ratio(uj, rb) * s * ch.relay_to_enb(j, rb);
      }
    }
  } else {
    const int pair = ctx.topo->d2d_pair_of(ue, cfg.num_cues);
    for (int j = 0; j < ch.num_relays(); ++j) {
      if (j == lu) continue;
      for (int uj : ctx.topo->relay_ues[static_cast<std::size_t>(j)]) {
        const double s = ctx.alloc->p1(uj, rb);
        if (s <= 0.0) continue;
        interference += ch.hop_ratio(uj, rb) * s * ch.relay_to_d2drx(j, pair, rb);
      }
    }
  }
  return ch.hop2_gain(ue, rb) / (interference + sigma2);
}

double two_hop_rate(const RateContext& ctx, int ue, int rb, double p1, double p2) {
  const double b = ctx.cfg->rb_bandwidth_hz;
  const double r1 = b * log2_1p(p1 * unit_sinr(ctx, ue, rb, 1));
  const double r2 = b * log2_1p(p2 * unit_sinr(ctx, ue, rb, 2));
  return 0.5 * std::min(r1, r2);
}

double e2e_rb_rate(const RateContext& ctx, int ue, int rb, double p_override) {
  const double p = p_override >= 0.0 ? p_override : ctx.alloc->p1(ue, rb);
  if (p <= 0.0) return 0.0;
  return 0.5 * ctx.cfg->rb_bandwidth_hz * log2_1p(p * unit_sinr(ctx, ue, rb, 1));
}

double robust_rb_rate(const RateContext& ctx, int ue, int rb, double p_override) {
  const ChannelState& ch = *ctx.ch;
  const double p = p_override >= 0.0 ? p_override : ctx.alloc->p1(ue, rb);
  if (p <= 0.0) return 0.0;
  const int lu = ch.serving_relay(ue);
  const double h = ch.hop1_gain(ue, rb);
  double nominal = 0.0, power_sq = 0.0;
  for (int uj = 0; uj < ch.num_ues(); ++uj) {
    if (ch.serving_relay(uj) == lu) continue;
    const double s = ctx.alloc->p1(uj, rb);
    if (s <= 0.0) continue;
    nominal += s * ch.ue_to_relay(uj, lu, rb);
    power_sq += s * s;
  }
  const double denom =
      nominal + h * ch.xi1_radius(ue, rb) * std::sqrt(power_sq) + ctx.cfg->sigma2();
  return 0.5 * ctx.cfg->rb_bandwidth_hz * log2_1p(p * h / denom);
}

double direct_d2d_rate(const RateContext& ctx, int ue, int rb, double p_override) {
  const ChannelState& ch = *ctx.ch;
  if (!ctx.topo->is_d2d(ue)) throw ChannelError("direct rate requested for a CUE");
  const double p = p_override >= 0.0 ? p_override : ctx.alloc->p1(ue, rb);
  if (p <= 0.0) return 0.0;
  const int pair = ctx.topo->d2d_pair_of(ue, ctx.cfg->num_cues);
  double interference = 0.0;
  for (int uj = 0; uj < ch.num_ues(); ++uj) {
    if (uj == ue) continue;
    const double s = ctx.alloc->p1(uj, rb);
    if (s <= 0.0) continue;
    interference += s * ch.ue_to_d2drx(uj, pair, rb);
  }
  const double sinr = p * ch.direct_d2d_gain(ue, rb) / (interference + ctx.cfg->sigma2());
  return ctx.cfg->rb_bandwidth_hz * log2_1p(sinr);
}

double rb_rate(const RateContext& ctx, RateMode mode, int ue, int rb, double p_override) {
  return mode == RateMode::Robust ? robust_rb_rate(ctx, ue, rb, p_override)
                                  : e2e_rb_rate(ctx, ue, rb, p_override);
}

double ue_total_rate(const RateContext& ctx, RateMode mode, int ue) {
  double total = 0.0;
  for (int n = 0; n < ctx.cfg->rb_count; ++n)
    if (ctx.alloc->assigned(ue, n)) total += rb_rate(ctx, mode, ue, n);
  return total;
}

const char* to_string(ConstraintFamily family) {
  switch (family) {
    case ConstraintFamily::RbExclusivity: return "rb-exclusivity";
    case ConstraintFamily::UePowerBudget: return "ue-power-budget";
    case ConstraintFamily::RelayPowerBudget: return "relay-power-budget";
    case ConstraintFamily::Hop1Interference: return "hop1-interference";
    case ConstraintFamily::Hop2Interference: return "hop2-interference";
    case ConstraintFamily::QosRate: return "qos-rate";
    case ConstraintFamily::NonNegativity: return "nonnegativity";
  }
  return "?";
}

FeasibilityReport check_constraints(const RateContext& ctx, RateMode mode) {
  const ChannelState& ch = *ctx.ch;
  const NetworkConfig& cfg = *ctx.cfg;
  const Topology& topo = *ctx.topo;
  const NetworkAllocation& alloc = *ctx.alloc;
  const bool robust = mode == RateMode::Robust;
  FeasibilityReport report;

  auto le = [](double lhs, double bound) {
    return lhs <= bound + 1e-12 * std::max(1.0, std::fabs(bound));
  };
  // upper-bound constraints: slack = bound - lhs
  auto push = [&](ConstraintFamily f, int l, int u, int n, double lhs, double bound,
                  bool pass) {
    report.checks.push_back({f, l, u, n, lhs, bound, bound - lhs, pass});
  };

  for (int l = 0; l < topo.num_relays(); ++l) {
    const auto& ues = topo.relay_ues[static_cast<std::size_t>(l)];

    for (int n = 0; n < cfg.rb_count; ++n) {
      int owners = 0;
      for (int u : ues) owners += alloc.assigned(u, n) ? 1 : 0;
      push(ConstraintFamily::RbExclusivity, l, -1, n, owners, 1.0, owners <= 1);
    }

    double relay_lhs = 0.0, relay_sq = 0.0;
    for (int u : ues) {
      for (int n = 0; n < cfg.rb_count; ++n) {
        const double s = alloc.p1(u, n);
        if (s <= 0.0) continue;
        double hr = ch.hop_ratio(u, n);
        if (!robust && ctx.perturb) hr += ctx.perturb->dh(u, n);
        relay_lhs += hr * s;
        relay_sq += s * s;
      }
    }
    if (robust) relay_lhs += ch.xi2_radius(l) * std::sqrt(relay_sq);
    push(ConstraintFamily::RelayPowerBudget, l, -1, -1, relay_lhs, cfg.p_max_relay_w(),
         le(relay_lhs, cfg.p_max_relay_w()));

    for (int n = 0; n < cfg.rb_count; ++n) {
      double lhs1 = 0.0, lhs2 = 0.0, sq = 0.0;
      bool any1 = false, any2 = false;
      const ReferenceUser& r2 = ch.hop2_reference(l, n);
      for (int u : ues) {
        const double s = alloc.p1(u, n);
        if (s <= 0.0) continue;
        sq += s * s;
        const ReferenceUser& r1 = ch.hop1_reference(u, n);
        if (r1.valid) {
          double g = r1.gain;
          if (!robust && ctx.perturb) g += ctx.perturb->dg1(u, n);
          lhs1 += s * g;
          any1 = true;
        }
        if (r2.valid) {
          double hg = ch.hop_ratio(u, n) * r2.gain;
          if (!robust && ctx.perturb) hg += ctx.perturb->dhg2(u, n);
          lhs2 += s * hg;
          any2 = true;
        }
      }
      if (any1) {
        if (robust) lhs1 += ch.xi3_radius(l, n) * std::sqrt(sq);
        push(ConstraintFamily::Hop1Interference, l, -1, n, lhs1, cfg.i_th1_w(),
             le(lhs1, cfg.i_th1_w()));
      }
      if (any2) {
        if (robust) lhs2 += ch.xi4_radius(l, n) * std::sqrt(sq);
        push(ConstraintFamily::Hop2Interference, l, -1, n, lhs2, cfg.i_th2_w(),
             le(lhs2, cfg.i_th2_w()));
      }
    }
  }

  for (int u = 0; u < topo.num_ues(); ++u) {
    double total_p = 0.0;
    double min_p = 0.0;
    for (int n = 0; n < cfg.rb_count; ++n) {
      total_p += alloc.p1(u, n);
      min_p = std::min(min_p, alloc.p_cand[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)]);
    }
    push(ConstraintFamily::UePowerBudget, ch.serving_relay(u), u, -1, total_p,
         cfg.p_max_ue_w(), le(total_p, cfg.p_max_ue_w()));
    push(ConstraintFamily::NonNegativity, ch.serving_relay(u), u, -1, -min_p, 0.0, min_p >= 0.0);

    // lower-bound constraint, slack = rate - Q
    const double q = topo.is_d2d(u) ? cfg.q_min_d2d_bps : cfg.q_min_cue_bps;
    const double rate = ue_total_rate(ctx, mode, u);
    report.checks.push_back({ConstraintFamily::QosRate, ch.serving_relay(u), u, -1, rate, q,
                             rate - q, rate >= q - 1e-9 * std::max(1.0, q)});
  }
  return report;
}

}  // namespace relaymatch

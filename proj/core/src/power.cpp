#include "relaymatch/power.hpp"

#include <cmath>
#include <limits>

namespace relaymatch {

PowerCaps power_caps(const RateContext& ctx, int ue, int rb) {
  const ChannelState& ch = *ctx.ch;
  const NetworkConfig& cfg = *ctx.cfg;
  const int l = ch.serving_relay(ue);

  const int own_rbs = ctx.alloc->rbs_held(ue);
  if (own_rbs == 0) return {};

  int relay_rbs = 0;
  for (int u : ctx.topo->relay_ues[static_cast<std::size_t>(l)]) relay_rbs += ctx.alloc->rbs_held(u);

  PowerCaps caps;
  caps.valid = true;
  const double ue_share = cfg.p_max_ue_w() / own_rbs;
  const double relay_share =
      cfg.p_max_relay_w() / ((ch.hop_ratio(ue, rb) + ch.xi2_radius(l)) * relay_rbs);
  caps.p_hat_max = std::min(ue_share, relay_share);

  caps.varpi = std::numeric_limits<double>::infinity();
  const ReferenceUser& r1 = ch.hop1_reference(ue, rb);
  if (r1.valid) caps.varpi = cfg.i_th1_w() / (r1.gain + ch.xi3_radius(l, rb));
  const ReferenceUser& r2 = ch.hop2_reference(l, rb);
  if (r2.valid) {
    const double hg = ch.hop_ratio(ue, rb) * r2.gain + ch.xi4_radius(l, rb);
    caps.varpi = std::min(caps.varpi, cfg.i_th2_w() / hg);
  }
  return caps;
}

double gdcpc_lambda(double target_se, double prev_se, double prev_power) {
  if (prev_se <= 0.0) return std::numeric_limits<double>::infinity();
  const double num = std::exp2(target_se) - 1.0;
  const double den = std::exp2(prev_se) - 1.0;
  return num / den * prev_power;
}

// The tracking target overshoots the minimum rate by 5%. Exactly at Q the
// assigned utility entries sum onto the quota rule's decision boundary, so
// kappa flaps on rounding noise and the outer loop never settles; the margin
// moves the fixed point clear of the boundary.
constexpr double kTargetMargin = 1.05;

double update_power(const RateContext& ctx, int ue, int rb, double prev_rate_se,
                    double prev_power, double target_share) {
  const PowerCaps caps = power_caps(ctx, ue, rb);
  if (!caps.valid) return 0.0;

  const NetworkConfig& cfg = *ctx.cfg;
  const double q_total = ctx.topo->is_d2d(ue) ? cfg.q_min_d2d_bps : cfg.q_min_cue_bps;
  if (target_share < 0.0) target_share = 1.0 / ctx.alloc->quota[static_cast<std::size_t>(ue)];
  const double target_se = kTargetMargin * q_total * target_share / cfg.rb_bandwidth_hz;

  const double lambda = gdcpc_lambda(target_se, prev_rate_se, prev_power);
  if (std::isfinite(lambda) && lambda <= caps.p_hat_max) return std::min(lambda, caps.varpi);
  return std::min(caps.p_hat_max, caps.varpi);
}

}  // namespace relaymatch

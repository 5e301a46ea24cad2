#pragma once

#include "relaymatch/rates.hpp"

namespace relaymatch {

// Per-(UE, RB) transmit power ceilings. p_hat_max splits the UE and relay
// budgets across assigned RBs; varpi keeps the reference victims below their
// interference thresholds under the worst-case gain deviations. varpi is
// +inf when no victim exists. valid is false for UEs holding no RBs (no
// transmission, caps undefined).
struct PowerCaps {
  double p_hat_max = 0.0;
  double varpi = 0.0;
  bool valid = false;
};

PowerCaps power_caps(const RateContext& ctx, int ue, int rb);

// target-tracking power scaling: grows the power when the previous rate was
// below target, shrinks it when above (rates as spectral efficiency, bit/s/Hz)
double gdcpc_lambda(double target_se, double prev_se, double prev_power);

// One power-control step for an assigned RB. prev_rate_se is this RB's rate
// at the previous iteration in bit/s/Hz; target_share is the fraction of the
// UE's minimum rate this RB must carry (default: even split over the quota).
// The tracking branch is additionally clamped to varpi so interference safety
// holds on both branches; the fallback uses the free parameter fixed at
// p_hat_max.
double update_power(const RateContext& ctx, int ue, int rb, double prev_rate_se,
                    double prev_power, double target_share = -1.0);

}  // namespace relaymatch

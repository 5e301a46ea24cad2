#pragma once

#include <string>
#include <vector>

#include "relaymatch/allocation.hpp"
#include "relaymatch/channel.hpp"

namespace relaymatch {

// Evaluation context: immutable channel + allocation snapshot. When perturb
// is set, nominal-formula evaluations use the perturbed link quantities;
// worst-case evaluations always use nominal gains plus the bounds.
struct RateContext {
  const NetworkConfig* cfg = nullptr;
  const Topology* topo = nullptr;
  const ChannelState* ch = nullptr;
  const NetworkAllocation* alloc = nullptr;
  const ChannelPerturbation* perturb = nullptr;

  RateContext(const ChannelState& c, const NetworkAllocation& a,
              const ChannelPerturbation* p = nullptr)
      : cfg(&c.cfg()), topo(&c.topo()), ch(&c), alloc(&a), perturb(p) {}
};

enum class RateMode { Nominal, Robust };

// SINR per watt of transmit power. Hop 1 sees cross-relay UE transmissions;
// hop 2 sees relay transmissions (eNB branch for CUEs, receiver branch for
// D2D traffic).
double unit_sinr(const RateContext& ctx, int ue, int rb, int hop);

// half the two-hop rate with explicit per-hop powers
double two_hop_rate(const RateContext& ctx, int ue, int rb, double p1, double p2);

// closed form under the equal-hop-power condition, first-hop power from the
// allocation (or p_override >= 0)
double e2e_rb_rate(const RateContext& ctx, int ue, int rb, double p_override = -1.0);

// worst-case per-RB rate from nominal gains and the xi1 radius
double robust_rb_rate(const RateContext& ctx, int ue, int rb, double p_override = -1.0);

// single-hop direct rate for a D2D transmitter, no relaying half factor;
// interference from co-RB transmitters in the current allocation
double direct_d2d_rate(const RateContext& ctx, int ue, int rb, double p_override = -1.0);

double rb_rate(const RateContext& ctx, RateMode mode, int ue, int rb, double p_override = -1.0);

// sum over assigned RBs
double ue_total_rate(const RateContext& ctx, RateMode mode, int ue);

enum class ConstraintFamily {
  RbExclusivity,   // one UE per RB per relay
  UePowerBudget,
  RelayPowerBudget,
  Hop1Interference,
  Hop2Interference,
  QosRate,
  NonNegativity,
};

const char* to_string(ConstraintFamily family);

struct ConstraintCheck {
  ConstraintFamily family;
  int relay = -1;
  int ue = -1;
  int rb = -1;
  double lhs = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // distance to violation, >= 0 when satisfied
  bool pass = true;
};

struct FeasibilityReport {
  std::vector<ConstraintCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  bool family_pass(ConstraintFamily f) const {
    for (const auto& c : checks)
      if (c.family == f && !c.pass) return false;
    return true;
  }
};

// Report-only evaluation of every constraint family. Robust mode adds the
// worst-case norm terms; nominal mode honours ctx.perturb, so a robust-feasible
// allocation can be replayed against sampled channel realizations.
FeasibilityReport check_constraints(const RateContext& ctx, RateMode mode);

}  // namespace relaymatch

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "relaymatch/matching.hpp"
#include "relaymatch/rates.hpp"

namespace relaymatch {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exhaustive ground truth for one relay's joint RB/power allocation on a desk
// scale instance. Candidates are every RB -> (UE | none) pattern crossed with
// per-pair power grids; unassigned pairs carry zero power. The grid has
// grid_levels log-spaced points per assigned pair spanning [cap/100, cap],
// cap being the effective ceiling min(p_hat_max, varpi) of that pattern.
struct OracleInstance {
  const ChannelState* ch = nullptr;
  NetworkAllocation background;  // frozen cross-relay state
  int relay = 0;
  int grid_levels = 5;
  bool enforce_qos = true;  // gate feasibility on the minimum-rate family too

  int num_ues() const;
  int num_rbs() const { return ch->num_rbs(); }
  // throws OracleError when U > 4, N > 4, G > 5 or the candidate count
  // (1 + U*G)^N exceeds 1e7
  void validate() const;
};

struct OracleCandidate {
  const std::vector<int>& rb_owner;  // local UE per RB, -1 unassigned
  const NetworkAllocation& alloc;
  double sum_rate_bps;
  bool feasible;
};

void enumerate_allocations(const OracleInstance& inst, RateMode mode,
                           const std::function<void(const OracleCandidate&)>& visit);

struct OracleOptimum {
  bool feasible = false;
  double sum_rate_bps = 0.0;
  NetworkAllocation best;
  long candidates = 0;
  long feasible_candidates = 0;
};

// Max sum rate over feasible candidates; !feasible when none pass.
OracleOptimum optimal_rate(const OracleInstance& inst, RateMode mode);

// Every assignment satisfying the matching definition (per-RB exclusivity,
// per-UE quota), up to 5x5.
void enumerate_matchings(int num_ues, int num_rbs, const Quota& quota,
                         const std::function<void(const Matching&)>& visit);

// All stable matchings of an instance, by filtering the full matching space.
std::vector<Matching> stable_set(const PreferenceProfiles& profiles, const Quota& quota);

}  // namespace relaymatch

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "relaymatch/utility.hpp"

namespace relaymatch {

// Ordered preferences derived from a utility matrix, descending, ties broken
// toward the lower index. Entries with non-positive utility are unacceptable
// and never listed.
struct PreferenceProfiles {
  std::vector<std::vector<int>> ue_pref;  // per UE: RB ids
  std::vector<std::vector<int>> rb_pref;  // per RB: UE ids

  int num_ues() const { return static_cast<int>(ue_pref.size()); }
  int num_rbs() const { return static_cast<int>(rb_pref.size()); }
};

struct Quota {
  std::vector<int> kappa;            // 1..N per UE
  std::vector<std::uint8_t> capped;  // minimum-rate target not reachable even with all RBs
};

// Smallest number of top RBs whose rates cover the UE's minimum rate target,
// capped at the RB count (capped flag set instead of failing).
Quota compute_quota(const UtilityMatrix& utility, const std::vector<double>& q_min);

PreferenceProfiles build_preferences(const UtilityMatrix& utility);

// One relay's RB assignment in local UE indices.
struct Matching {
  std::vector<int> rb_owner;             // per RB, -1 = unmatched
  std::vector<std::vector<int>> ue_rbs;  // per UE, ascending RB ids

  bool consistent() const;
};

struct AllocationStats {
  long proposals = 0;  // message count: one per tentative RB proposal
  int rounds = 0;
  std::vector<std::uint8_t> quota_unmet;  // UEs left below quota at termination
  std::vector<std::uint8_t> was_full;     // UEs that reached their quota at some point
};

struct AllocationResult {
  Matching matching;
  AllocationStats stats;
};

// Quota-constrained RB-proposing deferred acceptance. Runs in synchronous
// rounds: every unassigned RB with a non-exhausted list proposes to its top
// choice as of the round start; a UE over quota revokes its least-preferred
// holding; a UE exactly at quota removes everything it likes less than its
// worst holding from both sides' lists. No pair is proposed twice, so the
// total work is linear in the combined profile length.
AllocationResult allocate_rbs(const PreferenceProfiles& profiles, const Quota& quota);

struct RationalityViolation {
  int ue = -1;
  int rb = -1;       // -1 for quota violations
  const char* kind;  // "unacceptable-pair" or "quota-exceeded"
};

struct StabilityReport {
  std::vector<std::pair<int, int>> blocking_pairs;  // (ue, rb)
  std::vector<RationalityViolation> rationality;
  bool stable() const { return blocking_pairs.empty() && rationality.empty(); }
};

// Exhaustive scan for blocking pairs (preference swap, or spare quota with an
// acceptable RB) and individual-rationality violations.
StabilityReport verify_stable(const Matching& m, const PreferenceProfiles& profiles,
                              const Quota& quota);

}  // namespace relaymatch

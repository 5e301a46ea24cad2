#pragma once

#include <vector>

#include "relaymatch/matching.hpp"
#include "relaymatch/power.hpp"
#include "relaymatch/rates.hpp"
#include "relaymatch/utility.hpp"

namespace relaymatch {

// Worst-case rate for every (UE, RB) pair of one relay at the candidate
// powers in ctx. Rows follow topo.relay_ues[relay] order.
UtilityMatrix build_utility_matrix(const RateContext& ctx, int relay);

struct TraceRow {
  int iteration = 0;
  int relay = 0;
  double sum_rate_bps = 0.0;
  long messages_matching = 0;
  long messages_x2 = 0;
};

// Everything one relay produced in one iteration; kept for auditing, the
// exchanged snapshot is folded into the global allocation at the barrier.
struct RelayIterationRecord {
  UtilityMatrix utility;  // rates the matching ran on
  Matching matching;      // local UE indices
  Quota quota;
  AllocationStats stats;
  double sum_rate_bps = 0.0;
};

struct IterationRecord {
  int t = 0;
  std::vector<RelayIterationRecord> relays;
};

struct NetworkRun {
  NetworkAllocation alloc;  // final assignment + powers
  std::vector<IterationRecord> history;
  std::vector<TraceRow> trace;
  std::vector<double> network_rate_trace;  // sum over relays per iteration
  std::vector<double> ue_rate_bps;         // final worst-case rates
  int iterations = 0;
  bool converged = false;
  long total_matching_messages = 0;
  long total_x2_messages = 0;
};

// One relay's update phase against the last exchanged snapshot: rebuild
// utility and quotas, run the matching, apply power control, re-evaluate the
// utility, and stage (x, P) for the multicast. `global` is read-only; the
// staged state lands in `next`.
RelayIterationRecord relay_round(const ChannelState& ch, const NetworkAllocation& global,
                                 int relay, NetworkAllocation& next);

// Iterates relay rounds with a synchronous exchange barrier until no relay
// improves by epsilon or t_max is hit. Deterministic for fixed inputs.
NetworkRun run_network(const NetworkConfig& cfg, const Topology& topo, const ChannelState& ch);

// CSV: iteration,relay,sum_rate_bps,messages_matching,messages_x2
std::string trace_to_csv(const NetworkRun& run);

}  // namespace relaymatch

#pragma once

#include "relaymatch/allocator.hpp"

namespace relaymatch {

// Underlay comparison scheme: CUEs keep the two-hop allocation (scheduled on
// a CUE-only view of the cell); each D2D pair may reuse the RBs of one CUE of
// its own relay and transmit directly, provided both minimum rates survive
// the sharing. A pair that cannot find such a host stays silent.
struct ReferenceRun {
  NetworkRun cue_run;
  NetworkAllocation alloc;          // CUE assignment plus the D2D overlay
  std::vector<int> host_cue;        // per pair: sharing CUE id, -1 = refrained
  std::vector<double> ue_rate_bps;  // CUEs: worst-case two-hop; D2D: direct

  double d2d_sum_bps(int num_cues) const {
    double s = 0.0;
    for (std::size_t u = static_cast<std::size_t>(num_cues); u < ue_rate_bps.size(); ++u)
      s += ue_rate_bps[u];
    return s;
  }
};

ReferenceRun run_reference(const NetworkConfig& cfg, const Topology& topo,
                           const ChannelState& ch);

}  // namespace relaymatch

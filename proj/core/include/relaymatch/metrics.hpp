#pragma once

#include <stdexcept>

namespace relaymatch {

struct MetricsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (r_prop - r_ref) / r_ref * 100
double rate_gain_pct(double r_prop, double r_ref);

// r / r_optm
double efficiency(double r, double r_optm);

struct OverheadCase {
  long matching_messages = 0;  // one run of the matching subroutine
  long total_messages = 0;     // T iterations, each matching run plus one X2 multicast
};

// Closed-form per-relay signalling overhead for both regimes: RBs equal to
// UEs, and more RBs than UEs (unit quotas, every message is one RB proposal).
struct SignallingOverhead {
  OverheadCase rbs_equal_ues;
  OverheadCase rbs_exceed_ues;
};

SignallingOverhead signalling_overhead(int num_rbs, int num_ues, int iterations);

}  // namespace relaymatch

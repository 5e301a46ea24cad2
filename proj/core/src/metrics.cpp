#include "relaymatch/metrics.hpp"

namespace relaymatch {

double rate_gain_pct(double r_prop, double r_ref) {
  if (r_ref <= 0.0) throw MetricsError("rate gain undefined: reference rate is zero");
  return (r_prop - r_ref) / r_ref * 100.0;
}

double efficiency(double r, double r_optm) {
  if (r_optm <= 0.0) throw MetricsError("efficiency undefined: optimum is zero");
  return r / r_optm;
}

SignallingOverhead signalling_overhead(int num_rbs, int num_ues, int iterations) {
  if (num_rbs < 1 || num_ues < 1 || iterations < 1)
    throw MetricsError("overhead formulas need positive counts");
  const long n = num_rbs, u = num_ues, t = iterations;
  SignallingOverhead s;
  s.rbs_equal_ues.matching_messages = n * (n + 1) / 2;
  s.rbs_equal_ues.total_messages = t * (n * n + n + 2) / 2;
  s.rbs_exceed_ues.matching_messages = (n + 1) * u - u * (u + 1) / 2;
  s.rbs_exceed_ues.total_messages = t * (2 * (n + 1) * u - u * (u + 1) + 2) / 2;
  return s;
}

}  // namespace relaymatch

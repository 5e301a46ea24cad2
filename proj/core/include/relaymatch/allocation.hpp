#pragma once

#include <cstdint>
#include <vector>

namespace relaymatch {

// Network-wide RB assignment and power state. x is the binary assignment;
// p_cand[u][n] is the first-hop power the UE would use on RB n. Only the
// product x * p_cand is ever transmitted, exchanged, or checked against
// constraints; candidate powers on unassigned RBs exist so that utilities for
// prospective assignments stay meaningful.
struct NetworkAllocation {
  std::vector<std::vector<std::uint8_t>> x;   // [ue][rb]
  std::vector<std::vector<double>> p_cand;    // [ue][rb], W
  std::vector<int> quota;                     // kappa per UE
  std::vector<std::uint8_t> qos_capped;       // quota hit the RB count

  static NetworkAllocation zero(int num_ues, int num_rbs) {
    NetworkAllocation a;
    a.x.assign(static_cast<std::size_t>(num_ues), std::vector<std::uint8_t>(num_rbs, 0));
    a.p_cand.assign(static_cast<std::size_t>(num_ues), std::vector<double>(num_rbs, 0.0));
    a.quota.assign(static_cast<std::size_t>(num_ues), 1);
    a.qos_capped.assign(static_cast<std::size_t>(num_ues), 0);
    return a;
  }

  bool assigned(int u, int n) const {
    return x[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] != 0;
  }
  // actual transmit power: zero off-assignment
  double p1(int u, int n) const {
    return assigned(u, n) ? p_cand[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)]
                          : 0.0;
  }
  int rbs_held(int u) const {
    int k = 0;
    for (auto v : x[static_cast<std::size_t>(u)]) k += v;
    return k;
  }
};

}  // namespace relaymatch

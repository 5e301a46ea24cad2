#pragma once

#include <vector>

namespace relaymatch {

// Dense UE-by-RB matrix of worst-case achievable rates (bit/s). Rows index a
// relay's UEs in local order, columns index RBs.
struct UtilityMatrix {
  int num_ues = 0;
  int num_rbs = 0;
  std::vector<double> v;

  UtilityMatrix() = default;
  UtilityMatrix(int ues, int rbs)
      : num_ues(ues), num_rbs(rbs), v(static_cast<std::size_t>(ues) * rbs, 0.0) {}

  double& at(int u, int n) { return v[static_cast<std::size_t>(u) * num_rbs + n]; }
  double at(int u, int n) const { return v[static_cast<std::size_t>(u) * num_rbs + n]; }
};

}  // namespace relaymatch

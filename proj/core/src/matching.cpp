#include "relaymatch/matching.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace relaymatch {

Quota compute_quota(const UtilityMatrix& utility, const std::vector<double>& q_min) {
  if (static_cast<int>(q_min.size()) != utility.num_ues)
    throw std::invalid_argument("q_min size does not match utility rows");
  Quota quota;
  quota.kappa.assign(static_cast<std::size_t>(utility.num_ues), 1);
  quota.capped.assign(static_cast<std::size_t>(utility.num_ues), 0);
  std::vector<double> row(static_cast<std::size_t>(utility.num_rbs));
  for (int u = 0; u < utility.num_ues; ++u) {
    for (int n = 0; n < utility.num_rbs; ++n) row[static_cast<std::size_t>(n)] = utility.at(u, n);
    std::sort(row.begin(), row.end(), std::greater<>());
    double acc = 0.0;
    int k = 0;
    while (k < utility.num_rbs && acc < q_min[static_cast<std::size_t>(u)]) {
      acc += row[static_cast<std::size_t>(k)];
      ++k;
    }
    if (acc < q_min[static_cast<std::size_t>(u)]) {
      quota.kappa[static_cast<std::size_t>(u)] = utility.num_rbs;
      quota.capped[static_cast<std::size_t>(u)] = 1;
    } else {
      quota.kappa[static_cast<std::size_t>(u)] = std::max(k, 1);
    }
  }
  return quota;
}

PreferenceProfiles build_preferences(const UtilityMatrix& utility) {
  PreferenceProfiles p;
  p.ue_pref.resize(static_cast<std::size_t>(utility.num_ues));
  p.rb_pref.resize(static_cast<std::size_t>(utility.num_rbs));
  for (int u = 0; u < utility.num_ues; ++u) {
    auto& pref = p.ue_pref[static_cast<std::size_t>(u)];
    for (int n = 0; n < utility.num_rbs; ++n)
      if (utility.at(u, n) > 0.0) pref.push_back(n);
    std::stable_sort(pref.begin(), pref.end(),
                     [&](int a, int b) { return utility.at(u, a) > utility.at(u, b); });
  }
  for (int n = 0; n < utility.num_rbs; ++n) {
    auto& pref = p.rb_pref[static_cast<std::size_t>(n)];
    for (int u = 0; u < utility.num_ues; ++u)
      if (utility.at(u, n) > 0.0) pref.push_back(u);
    std::stable_sort(pref.begin(), pref.end(),
                     [&](int a, int b) { return utility.at(a, n) > utility.at(b, n); });
  }
  return p;
}

bool Matching::consistent() const {
  for (std::size_t n = 0; n < rb_owner.size(); ++n) {
    const int u = rb_owner[n];
    if (u < 0) continue;
    if (u >= static_cast<int>(ue_rbs.size())) return false;
    const auto& held = ue_rbs[static_cast<std::size_t>(u)];
    if (std::find(held.begin(), held.end(), static_cast<int>(n)) == held.end()) return false;
  }
  for (std::size_t u = 0; u < ue_rbs.size(); ++u)
    for (int n : ue_rbs[u])
      if (n < 0 || n >= static_cast<int>(rb_owner.size()) ||
          rb_owner[static_cast<std::size_t>(n)] != static_cast<int>(u))
        return false;
  return true;
}

namespace {

// position of each opposite-side member in a profile, -1 if absent
std::vector<std::vector<int>> rank_table(const std::vector<std::vector<int>>& prefs, int opp) {
  std::vector<std::vector<int>> rank(prefs.size(), std::vector<int>(static_cast<std::size_t>(opp), -1));
  for (std::size_t i = 0; i < prefs.size(); ++i)
    for (std::size_t r = 0; r < prefs[i].size(); ++r)
      rank[i][static_cast<std::size_t>(prefs[i][r])] = static_cast<int>(r);
  return rank;
}

}  // namespace

AllocationResult allocate_rbs(const PreferenceProfiles& profiles, const Quota& quota) {
  const int U = profiles.num_ues();
  const int N = profiles.num_rbs();
  if (static_cast<int>(quota.kappa.size()) != U)
    throw std::invalid_argument("quota size does not match profiles");
  for (int k : quota.kappa)
    if (k < 1 || k > std::max(N, 1)) throw std::invalid_argument("quota outside [1, N]");

  const auto rank_ue = rank_table(profiles.ue_pref, N);  // [u][n]
  std::vector<std::uint8_t> dead(static_cast<std::size_t>(U) * static_cast<std::size_t>(N), 0);
  auto is_dead = [&](int u, int n) -> std::uint8_t& {
    return dead[static_cast<std::size_t>(u) * static_cast<std::size_t>(N) + n];
  };

  std::vector<int> owner(static_cast<std::size_t>(N), -1);
  std::vector<std::size_t> cursor(static_cast<std::size_t>(N), 0);
  std::vector<std::set<int>> held(static_cast<std::size_t>(U));  // ranks in ue_pref
  std::vector<std::size_t> tail(static_cast<std::size_t>(U));
  for (int u = 0; u < U; ++u) tail[static_cast<std::size_t>(u)] = profiles.ue_pref[static_cast<std::size_t>(u)].size();

  AllocationResult res;

  auto top = [&](int n) -> int {
    auto& c = cursor[static_cast<std::size_t>(n)];
    const auto& pref = profiles.rb_pref[static_cast<std::size_t>(n)];
    while (c < pref.size() && is_dead(pref[c], n)) ++c;
    return c < pref.size() ? pref[c] : -1;
  };

  auto prune_at_quota = [&](int u) {
    auto& h = held[static_cast<std::size_t>(u)];
    if (static_cast<int>(h.size()) != quota.kappa[static_cast<std::size_t>(u)]) return;
    const std::size_t keep = static_cast<std::size_t>(*h.rbegin()) + 1;
    const auto& pref = profiles.ue_pref[static_cast<std::size_t>(u)];
    auto& t = tail[static_cast<std::size_t>(u)];
    for (std::size_t i = keep; i < t; ++i) is_dead(u, pref[i]) = 1;
    t = std::min(t, keep);
  };

  res.stats.was_full.assign(static_cast<std::size_t>(U), 0);
  std::vector<std::pair<int, int>> proposals;
  while (true) {
    proposals.clear();
    for (int n = 0; n < N; ++n) {
      if (owner[static_cast<std::size_t>(n)] >= 0) continue;
      const int u = top(n);
      if (u >= 0) proposals.emplace_back(n, u);
    }
    if (proposals.empty()) break;
    ++res.stats.rounds;

    for (auto [n, u] : proposals) {
      ++res.stats.proposals;
      if (is_dead(u, n)) continue;  // target pruned earlier this round
      auto& h = held[static_cast<std::size_t>(u)];
      const int kappa = quota.kappa[static_cast<std::size_t>(u)];
      const int my_rank = rank_ue[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)];
      if (static_cast<int>(h.size()) < kappa) {
        owner[static_cast<std::size_t>(n)] = u;
        h.insert(my_rank);
      } else {
        const int worst = *h.rbegin();
        if (my_rank < worst) {
          // revoke the least-preferred holding in favour of n
          const int n_out = profiles.ue_pref[static_cast<std::size_t>(u)][static_cast<std::size_t>(worst)];
          owner[static_cast<std::size_t>(n_out)] = -1;
          h.erase(worst);
          is_dead(u, n_out) = 1;
          owner[static_cast<std::size_t>(n)] = u;
          h.insert(my_rank);
        } else {
          is_dead(u, n) = 1;
          continue;
        }
      }
      if (static_cast<int>(h.size()) == kappa) res.stats.was_full[static_cast<std::size_t>(u)] = 1;
      prune_at_quota(u);
    }
  }

  res.matching.rb_owner = owner;
  res.matching.ue_rbs.assign(static_cast<std::size_t>(U), {});
  for (int n = 0; n < N; ++n)
    if (owner[static_cast<std::size_t>(n)] >= 0)
      res.matching.ue_rbs[static_cast<std::size_t>(owner[static_cast<std::size_t>(n)])].push_back(n);
  res.stats.quota_unmet.assign(static_cast<std::size_t>(U), 0);
  for (int u = 0; u < U; ++u)
    if (static_cast<int>(held[static_cast<std::size_t>(u)].size()) < quota.kappa[static_cast<std::size_t>(u)])
      res.stats.quota_unmet[static_cast<std::size_t>(u)] = 1;
  return res;
}

StabilityReport verify_stable(const Matching& m, const PreferenceProfiles& profiles,
                              const Quota& quota) {
  const int U = profiles.num_ues();
  const int N = profiles.num_rbs();
  const auto rank_ue = rank_table(profiles.ue_pref, N);
  const auto rank_rb = rank_table(profiles.rb_pref, U);

  StabilityReport report;
  for (int u = 0; u < U; ++u) {
    const auto& held = m.ue_rbs[static_cast<std::size_t>(u)];
    if (static_cast<int>(held.size()) > quota.kappa[static_cast<std::size_t>(u)])
      report.rationality.push_back({u, -1, "quota-exceeded"});
    for (int n : held)
      if (rank_ue[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] < 0 ||
          rank_rb[static_cast<std::size_t>(n)][static_cast<std::size_t>(u)] < 0)
        report.rationality.push_back({u, n, "unacceptable-pair"});
  }

  for (int u = 0; u < U; ++u) {
    const auto& held = m.ue_rbs[static_cast<std::size_t>(u)];
    int worst_rank = -1;
    for (int n : held)
      worst_rank = std::max(worst_rank, rank_ue[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)]);
    const bool spare = static_cast<int>(held.size()) < quota.kappa[static_cast<std::size_t>(u)];
    for (int n = 0; n < N; ++n) {
      const int ru = rank_ue[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)];
      const int rn = rank_rb[static_cast<std::size_t>(n)][static_cast<std::size_t>(u)];
      if (ru < 0 || rn < 0) continue;  // not mutually acceptable
      if (m.rb_owner[static_cast<std::size_t>(n)] == u) continue;
      const int cur = m.rb_owner[static_cast<std::size_t>(n)];
      const int cur_rank =
          cur < 0 ? -1 : rank_rb[static_cast<std::size_t>(n)][static_cast<std::size_t>(cur)];
      const bool rb_prefers_u = cur < 0 || cur_rank < 0 || rn < cur_rank;
      if (!rb_prefers_u) continue;
      const bool ue_wants = spare || (worst_rank >= 0 && ru < worst_rank);
      if (ue_wants) report.blocking_pairs.emplace_back(u, n);
    }
  }
  return report;
}

}  // namespace relaymatch

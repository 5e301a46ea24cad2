#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaymatch/config.hpp"
#include "relaymatch/topology.hpp"

namespace relaymatch {

struct ChannelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Worst-case interference victim for one transmission. For hop 1 the victim
// is another relay; for hop 2 it is a D2D receiver served by another relay.
// !valid means no candidate exists and the matching interference constraint
// is inactive.
struct ReferenceUser {
  int id = -1;
  double gain = 0.0;
  bool valid = false;
};

// Snapshot of all link gains for one realization, plus derived quantities:
// hop power ratios, reference users, and the absolute uncertainty radii
// obtained by scaling each nominal vector norm with the configured relative
// bounds xi1..xi4.
//
// Link gains are linear and strictly positive:
//   ue_to_relay[u][l][n]    uplink; l == serving(u) is the hop-1 direct gain
//   relay_to_enb[l][n]      hop-2 direct gain for CUE traffic, interference
//                           gain at the eNB otherwise
//   relay_to_d2drx[l][d][n] hop-2 direct gain when relay l serves pair d,
//                           interference gain at that receiver otherwise
//   ue_to_d2drx[u][d][n]    u == tx(d) is the direct D2D link, otherwise
//                           co-channel interference at the receiver
class ChannelState {
 public:
  ChannelState() = default;
  ChannelState(NetworkConfig cfg, Topology topo);

  const NetworkConfig& cfg() const { return cfg_; }
  const Topology& topo() const { return topo_; }
  int num_ues() const { return topo_.num_ues(); }
  int num_relays() const { return topo_.num_relays(); }
  int num_rbs() const { return cfg_.rb_count; }

  double& ue_to_relay(int u, int l, int n) { return ue_relay_[idx_uln(u, l, n)]; }
  double ue_to_relay(int u, int l, int n) const { return ue_relay_[idx_uln(u, l, n)]; }
  double& relay_to_enb(int l, int n) { return relay_enb_[idx_ln(l, n)]; }
  double relay_to_enb(int l, int n) const { return relay_enb_[idx_ln(l, n)]; }
  double& relay_to_d2drx(int l, int d, int n) { return relay_rx_[idx_ldn(l, d, n)]; }
  double relay_to_d2drx(int l, int d, int n) const { return relay_rx_[idx_ldn(l, d, n)]; }
  double& ue_to_d2drx(int u, int d, int n) { return ue_rx_[idx_udn(u, d, n)]; }
  double ue_to_d2drx(int u, int d, int n) const { return ue_rx_[idx_udn(u, d, n)]; }

  int serving_relay(int u) const { return topo_.ues[static_cast<std::size_t>(u)].serving_relay; }

  // hop-1 direct gain (UE -> serving relay)
  double hop1_gain(int u, int n) const { return ue_to_relay(u, serving_relay(u), n); }
  // hop-2 direct gain (serving relay -> eNB for CUEs, -> paired receiver else)
  double hop2_gain(int u, int n) const;
  // H = hop1/hop2, the factor turning first-hop power into second-hop power
  double hop_ratio(int u, int n) const { return hop1_gain(u, n) / hop2_gain(u, n); }
  double direct_d2d_gain(int ue, int n) const;

  const ReferenceUser& hop1_reference(int u, int n) const { return ref1_[idx_un(u, n)]; }
  const ReferenceUser& hop2_reference(int l, int n) const { return ref2_[idx_ln(l, n)]; }

  // absolute ellipsoid radii
  double xi1_radius(int u, int n) const { return xi1_abs_[idx_un(u, n)]; }
  double xi2_radius(int l) const { return xi2_abs_[static_cast<std::size_t>(l)]; }
  double xi3_radius(int l, int n) const { return xi3_abs_[idx_ln(l, n)]; }
  double xi4_radius(int l, int n) const { return xi4_abs_[idx_ln(l, n)]; }

  // Recomputes reference users and uncertainty radii from the current gains;
  // called by the samplers and after a channel load.
  void refresh_derived();

  // Copy with replaced association lists (e.g. CUE-only scheduling); derived
  // quantities are rebuilt for the new partition.
  ChannelState with_associations(std::vector<std::vector<int>> relay_ues) const;

  // Copy with a replaced configuration (same gains; counts must match);
  // uncertainty radii and reference users are rebuilt.
  ChannelState with_config(const NetworkConfig& cfg) const;

 private:
  std::size_t idx_uln(int u, int l, int n) const;
  std::size_t idx_ln(int l, int n) const;
  std::size_t idx_ldn(int l, int d, int n) const;
  std::size_t idx_udn(int u, int d, int n) const;
  std::size_t idx_un(int u, int n) const;

  NetworkConfig cfg_;
  Topology topo_;
  std::vector<double> ue_relay_, relay_enb_, relay_rx_, ue_rx_;
  std::vector<ReferenceUser> ref1_, ref2_;
  std::vector<double> xi1_abs_, xi2_abs_, xi3_abs_, xi4_abs_;
};

// Normalized interference gains over the hop-1 direct gain, and noise
// normalized the same way.
struct NormalizedGains {
  int num_ues = 0;
  int num_rbs = 0;
  std::vector<double> f_bar;        // [u][uj][n], zero when uj shares u's relay
  std::vector<double> sigma_tilde;  // [u][n]

  double f(int u, int uj, int n) const {
    return f_bar[(static_cast<std::size_t>(u) * num_ues + uj) * num_rbs + n];
  }
  double sigma(int u, int n) const {
    return sigma_tilde[static_cast<std::size_t>(u) * num_rbs + n];
  }
};

// Deviations drawn inside the four uncertainty ellipsoids. Values are the
// post-clamp deltas: nominal + delta is never pushed below zero, which can
// only shrink a quadratic sum and so never leaves the ellipsoid.
struct ChannelPerturbation {
  int num_ues = 0;
  int num_rbs = 0;
  std::vector<double> d_f;    // [u][uj][n] normalized-gain deviation
  std::vector<double> d_h;    // [u][n] hop-ratio deviation
  std::vector<double> d_g1;   // [u][n] hop-1 reference-gain deviation
  std::vector<double> d_hg2;  // [u][n] deviation of the product H * hop-2 ref gain

  double df(int u, int uj, int n) const {
    return d_f[(static_cast<std::size_t>(u) * num_ues + uj) * num_rbs + n];
  }
  double dh(int u, int n) const { return d_h[static_cast<std::size_t>(u) * num_rbs + n]; }
  double dg1(int u, int n) const { return d_g1[static_cast<std::size_t>(u) * num_rbs + n]; }
  double dhg2(int u, int n) const { return d_hg2[static_cast<std::size_t>(u) * num_rbs + n]; }
};

// Path loss + log-normal shadowing + per-RB Rayleigh fading, snapshot model.
// Deterministic under (topology, cfg, seed).
ChannelState sample_link_gains(const Topology& topo, const NetworkConfig& cfg, std::uint64_t seed);

NormalizedGains normalized_gains(const ChannelState& cs, double sigma2);

// Eq.-style worst-victim lookup. hop 1 keys on (ue, rb); hop 2 on (relay, rb).
ReferenceUser reference_user(const ChannelState& cs, int relay, int ue, int hop, int rb);

// Uniform draw inside each ellipsoid; on_boundary samples the surface.
ChannelPerturbation sample_perturbation(const ChannelState& cs, std::uint64_t seed,
                                        bool on_boundary = false);

// CSV replay: columns link,hop,rb,gain
std::string dump_channel_csv(const ChannelState& cs);
ChannelState load_channel_csv(const NetworkConfig& cfg, const Topology& topo,
                              const std::string& csv_text);

}  // namespace relaymatch

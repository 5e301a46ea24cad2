#include "relaymatch/channel.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "relaymatch/rng.hpp"

namespace relaymatch {

ChannelState::ChannelState(NetworkConfig cfg, Topology topo)
    : cfg_(std::move(cfg)), topo_(std::move(topo)) {
  const std::size_t U = static_cast<std::size_t>(topo_.num_ues());
  const std::size_t L = static_cast<std::size_t>(topo_.num_relays());
  const std::size_t D = static_cast<std::size_t>(cfg_.num_d2d_pairs);
  const std::size_t N = static_cast<std::size_t>(cfg_.rb_count);
  ue_relay_.assign(U * L * N, 0.0);
  relay_enb_.assign(L * N, 0.0);
  relay_rx_.assign(L * D * N, 0.0);
  ue_rx_.assign(U * D * N, 0.0);
  ref1_.assign(U * N, {});
  ref2_.assign(L * N, {});
  xi1_abs_.assign(U * N, 0.0);
  xi2_abs_.assign(L, 0.0);
  xi3_abs_.assign(L * N, 0.0);
  xi4_abs_.assign(L * N, 0.0);
}

std::size_t ChannelState::idx_uln(int u, int l, int n) const {
  return (static_cast<std::size_t>(u) * topo_.num_relays() + l) * cfg_.rb_count + n;
}
std::size_t ChannelState::idx_ln(int l, int n) const {
  return static_cast<std::size_t>(l) * cfg_.rb_count + n;
}
std::size_t ChannelState::idx_ldn(int l, int d, int n) const {
  return (static_cast<std::size_t>(l) * cfg_.num_d2d_pairs + d) * cfg_.rb_count + n;
}
std::size_t ChannelState::idx_udn(int u, int d, int n) const {
  return (static_cast<std::size_t>(u) * cfg_.num_d2d_pairs + d) * cfg_.rb_count + n;
}
std::size_t ChannelState::idx_un(int u, int n) const {
  return static_cast<std::size_t>(u) * cfg_.rb_count + n;
}

double ChannelState::hop2_gain(int u, int n) const {
  const int l = serving_relay(u);
  if (topo_.is_d2d(u)) return relay_to_d2drx(l, topo_.d2d_pair_of(u, cfg_.num_cues), n);
  return relay_to_enb(l, n);
}

double ChannelState::direct_d2d_gain(int ue, int n) const {
  if (!topo_.is_d2d(ue)) throw ChannelError("direct D2D gain requested for a CUE");
  return ue_to_d2drx(ue, topo_.d2d_pair_of(ue, cfg_.num_cues), n);
}

void ChannelState::refresh_derived() {
  const int U = topo_.num_ues();
  const int L = topo_.num_relays();
  const int N = cfg_.rb_count;

  for (int u = 0; u < U; ++u)
    for (int n = 0; n < N; ++n) ref1_[idx_un(u, n)] = reference_user(*this, -1, u, 1, n);
  for (int l = 0; l < L; ++l)
    for (int n = 0; n < N; ++n) ref2_[idx_ln(l, n)] = reference_user(*this, l, -1, 2, n);

  // xi1: per (u, n), nominal vector = normalized cross-relay gains
  for (int u = 0; u < U; ++u) {
    const int lu = serving_relay(u);
    for (int n = 0; n < N; ++n) {
      const double h = hop1_gain(u, n);
      double ss = 0.0;
      for (int uj = 0; uj < U; ++uj) {
        if (serving_relay(uj) == lu) continue;
        const double f = ue_to_relay(uj, lu, n) / h;
        ss += f * f;
      }
      xi1_abs_[idx_un(u, n)] = cfg_.xi1 * std::sqrt(ss);
    }
  }
  // xi2: per relay, nominal vector = hop ratios over (u in U_l, n)
  for (int l = 0; l < L; ++l) {
    double ss = 0.0;
    for (int u : topo_.relay_ues[static_cast<std::size_t>(l)])
      for (int n = 0; n < N; ++n) {
        const double hr = hop_ratio(u, n);
        ss += hr * hr;
      }
    xi2_abs_[static_cast<std::size_t>(l)] = cfg_.xi2 * std::sqrt(ss);
  }
  // xi3/xi4: per (l, n) over the relay's UEs
  for (int l = 0; l < L; ++l) {
    for (int n = 0; n < N; ++n) {
      double ss3 = 0.0, ss4 = 0.0;
      const ReferenceUser& r2 = ref2_[idx_ln(l, n)];
      for (int u : topo_.relay_ues[static_cast<std::size_t>(l)]) {
        const ReferenceUser& r1 = ref1_[idx_un(u, n)];
        if (r1.valid) ss3 += r1.gain * r1.gain;
        if (r2.valid) {
          const double hg = hop_ratio(u, n) * r2.gain;
          ss4 += hg * hg;
        }
      }
      xi3_abs_[idx_ln(l, n)] = cfg_.xi3 * std::sqrt(ss3);
      xi4_abs_[idx_ln(l, n)] = cfg_.xi4 * std::sqrt(ss4);
    }
  }
}

ChannelState ChannelState::with_associations(std::vector<std::vector<int>> relay_ues) const {
  ChannelState out = *this;
  out.topo_.relay_ues = std::move(relay_ues);
  out.refresh_derived();
  return out;
}

ChannelState ChannelState::with_config(const NetworkConfig& cfg) const {
  if (cfg.num_relays != cfg_.num_relays || cfg.num_cues != cfg_.num_cues ||
      cfg.num_d2d_pairs != cfg_.num_d2d_pairs || cfg.rb_count != cfg_.rb_count)
    throw ChannelError("with_config: structural counts must match the sampled channel");
  ChannelState out = *this;
  out.cfg_ = cfg;
  out.refresh_derived();
  return out;
}

namespace {

double large_scale_gain(Random& rng, const NetworkConfig& cfg, double dist_m, bool relay_link) {
  const double d = std::max(dist_m, 1.0);
  const double alpha = relay_link ? cfg.pl_exponent_relay : cfg.pl_exponent_ue;
  const double loss_db = cfg.pl_ref_db + 10.0 * alpha * std::log10(d);
  return db_to_linear(-loss_db + cfg.shadowing_db * rng.normal());
}

double rayleigh_power(Random& rng) {
  double fade = rng.exponential();
  while (fade <= 0.0) fade = rng.exponential();
  return fade;
}

}  // namespace

ChannelState sample_link_gains(const Topology& topo, const NetworkConfig& cfg,
                               std::uint64_t seed) {
  ChannelState cs(cfg, topo);
  Random rng(mix_seed(seed, 2));  // stream tag 2: channel
  const Point enb{cfg.cell_side_m / 2.0, cfg.cell_side_m / 2.0};
  const int U = topo.num_ues();
  const int L = topo.num_relays();
  const int D = cfg.num_d2d_pairs;
  const int N = cfg.rb_count;

  // draw order is pinned; changing it changes every seeded experiment
  for (int u = 0; u < U; ++u)
    for (int l = 0; l < L; ++l) {
      const double ls = large_scale_gain(
          rng, cfg,
          distance(topo.ues[static_cast<std::size_t>(u)].pos,
                   topo.relay_positions[static_cast<std::size_t>(l)]),
          false);
      for (int n = 0; n < N; ++n) cs.ue_to_relay(u, l, n) = ls * rayleigh_power(rng);
    }
  for (int l = 0; l < L; ++l) {
    const double ls = large_scale_gain(
        rng, cfg, distance(topo.relay_positions[static_cast<std::size_t>(l)], enb), true);
    for (int n = 0; n < N; ++n) cs.relay_to_enb(l, n) = ls * rayleigh_power(rng);
  }
  for (int l = 0; l < L; ++l)
    for (int d = 0; d < D; ++d) {
      const Point& rx = topo.ues[static_cast<std::size_t>(cfg.num_cues + d)].d2d_rx_pos;
      const double ls = large_scale_gain(
          rng, cfg, distance(topo.relay_positions[static_cast<std::size_t>(l)], rx), false);
      for (int n = 0; n < N; ++n) cs.relay_to_d2drx(l, d, n) = ls * rayleigh_power(rng);
    }
  for (int u = 0; u < U; ++u)
    for (int d = 0; d < D; ++d) {
      const Point& rx = topo.ues[static_cast<std::size_t>(cfg.num_cues + d)].d2d_rx_pos;
      const double ls = large_scale_gain(
          rng, cfg, distance(topo.ues[static_cast<std::size_t>(u)].pos, rx), false);
      for (int n = 0; n < N; ++n) cs.ue_to_d2drx(u, d, n) = ls * rayleigh_power(rng);
    }

  cs.refresh_derived();
  return cs;
}

NormalizedGains normalized_gains(const ChannelState& cs, double sigma2) {
  const int U = cs.num_ues();
  const int N = cs.num_rbs();
  NormalizedGains ng;
  ng.num_ues = U;
  ng.num_rbs = N;
  ng.f_bar.assign(static_cast<std::size_t>(U) * U * N, 0.0);
  ng.sigma_tilde.assign(static_cast<std::size_t>(U) * N, 0.0);
  for (int u = 0; u < U; ++u) {
    const int lu = cs.serving_relay(u);
    for (int n = 0; n < N; ++n) {
      const double h = cs.hop1_gain(u, n);
      if (h <= 0.0) throw ChannelError("degenerate channel: zero hop-1 gain");
      ng.sigma_tilde[static_cast<std::size_t>(u) * N + n] = sigma2 / h;
      for (int uj = 0; uj < U; ++uj) {
        if (cs.serving_relay(uj) == lu) continue;
        ng.f_bar[(static_cast<std::size_t>(u) * U + uj) * N + n] = cs.ue_to_relay(uj, lu, n) / h;
      }
    }
  }
  return ng;
}

ReferenceUser reference_user(const ChannelState& cs, int relay, int ue, int hop, int rb) {
  ReferenceUser best;
  if (hop == 1) {
    const int lu = cs.serving_relay(ue);
    for (int j = 0; j < cs.num_relays(); ++j) {
      if (j == lu) continue;
      const double g = cs.ue_to_relay(ue, j, rb);
      if (!best.valid || g > best.gain) best = {j, g, true};
    }
  } else if (hop == 2) {
    for (int d = 0; d < cs.cfg().num_d2d_pairs; ++d) {
      const int tx = cs.cfg().num_cues + d;
      if (cs.serving_relay(tx) == relay) continue;
      const double g = cs.relay_to_d2drx(relay, d, rb);
      if (!best.valid || g > best.gain) best = {d, g, true};
    }
  } else {
    throw ChannelError("hop must be 1 or 2");
  }
  return best;
}

ChannelPerturbation sample_perturbation(const ChannelState& cs, std::uint64_t seed,
                                        bool on_boundary) {
  Random rng(mix_seed(seed, 3));  // stream tag 3: perturbation
  const int U = cs.num_ues();
  const int L = cs.num_relays();
  const int N = cs.num_rbs();
  const NormalizedGains ng = normalized_gains(cs, cs.cfg().sigma2());

  ChannelPerturbation p;
  p.num_ues = U;
  p.num_rbs = N;
  p.d_f.assign(static_cast<std::size_t>(U) * U * N, 0.0);
  p.d_h.assign(static_cast<std::size_t>(U) * N, 0.0);
  p.d_g1.assign(static_cast<std::size_t>(U) * N, 0.0);
  p.d_hg2.assign(static_cast<std::size_t>(U) * N, 0.0);

  // clamp so nominal + delta stays nonnegative; only shrinks the draw
  auto clamped = [](double nominal, double delta) { return std::max(delta, -nominal); };

  for (int u = 0; u < U; ++u) {
    const int lu = cs.serving_relay(u);
    std::vector<int> cross;
    for (int uj = 0; uj < U; ++uj)
      if (cs.serving_relay(uj) != lu) cross.push_back(uj);
    for (int n = 0; n < N; ++n) {
      const auto draw = rng.ball(cross.size(), cs.xi1_radius(u, n), on_boundary);
      for (std::size_t k = 0; k < cross.size(); ++k) {
        const int uj = cross[k];
        p.d_f[(static_cast<std::size_t>(u) * U + uj) * N + n] =
            clamped(ng.f(u, uj, n), draw[k]);
      }
    }
  }

  for (int l = 0; l < L; ++l) {
    const auto& ues = cs.topo().relay_ues[static_cast<std::size_t>(l)];
    const auto draw = rng.ball(ues.size() * static_cast<std::size_t>(N), cs.xi2_radius(l),
                               on_boundary);
    std::size_t k = 0;
    for (int u : ues)
      for (int n = 0; n < N; ++n, ++k)
        p.d_h[static_cast<std::size_t>(u) * N + n] = clamped(cs.hop_ratio(u, n), draw[k]);

    for (int n = 0; n < N; ++n) {
      const auto d3 = rng.ball(ues.size(), cs.xi3_radius(l, n), on_boundary);
      const auto d4 = rng.ball(ues.size(), cs.xi4_radius(l, n), on_boundary);
      const ReferenceUser& r2 = cs.hop2_reference(l, n);
      std::size_t i = 0;
      for (int u : ues) {
        const ReferenceUser& r1 = cs.hop1_reference(u, n);
        p.d_g1[static_cast<std::size_t>(u) * N + n] =
            r1.valid ? clamped(r1.gain, d3[i]) : 0.0;
        p.d_hg2[static_cast<std::size_t>(u) * N + n] =
            r2.valid ? clamped(cs.hop_ratio(u, n) * r2.gain, d4[i]) : 0.0;
        ++i;
      }
    }
  }
  return p;
}

std::string dump_channel_csv(const ChannelState& cs) {
  std::ostringstream out;
  out << "link,hop,rb,gain\n";
  out << std::setprecision(17);
  const int U = cs.num_ues();
  const int L = cs.num_relays();
  const int D = cs.cfg().num_d2d_pairs;
  for (int u = 0; u < U; ++u)
    for (int l = 0; l < L; ++l)
      for (int n = 0; n < cs.num_rbs(); ++n)
        out << "ue" << u << ":relay" << l << ",1," << n << ',' << cs.ue_to_relay(u, l, n) << '\n';
  for (int l = 0; l < L; ++l)
    for (int n = 0; n < cs.num_rbs(); ++n)
      out << "relay" << l << ":enb,2," << n << ',' << cs.relay_to_enb(l, n) << '\n';
  for (int l = 0; l < L; ++l)
    for (int d = 0; d < D; ++d)
      for (int n = 0; n < cs.num_rbs(); ++n)
        out << "relay" << l << ":d2drx" << d << ",2," << n << ',' << cs.relay_to_d2drx(l, d, n)
            << '\n';
  for (int u = 0; u < U; ++u)
    for (int d = 0; d < D; ++d)
      for (int n = 0; n < cs.num_rbs(); ++n)
        out << "ue" << u << ":d2drx" << d << ",1," << n << ',' << cs.ue_to_d2drx(u, d, n) << '\n';
  return out.str();
}

ChannelState load_channel_csv(const NetworkConfig& cfg, const Topology& topo,
                              const std::string& csv_text) {
  ChannelState cs(cfg, topo);
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw ChannelError("channel CSV is empty");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string link, hop_s, rb_s, gain_s;
    if (!std::getline(row, link, ',') || !std::getline(row, hop_s, ',') ||
        !std::getline(row, rb_s, ',') || !std::getline(row, gain_s))
      throw ChannelError("malformed channel CSV row: " + line);
    const int n = std::stoi(rb_s);
    const double gain = std::stod(gain_s);
    const auto sep = link.find(':');
    if (sep == std::string::npos) throw ChannelError("malformed link id: " + link);
    const std::string from = link.substr(0, sep), to = link.substr(sep + 1);
    if (from.rfind("ue", 0) == 0 && to.rfind("relay", 0) == 0) {
      cs.ue_to_relay(std::stoi(from.substr(2)), std::stoi(to.substr(5)), n) = gain;
    } else if (from.rfind("relay", 0) == 0 && to == "enb") {
      cs.relay_to_enb(std::stoi(from.substr(5)), n) = gain;
    } else if (from.rfind("relay", 0) == 0 && to.rfind("d2drx", 0) == 0) {
      cs.relay_to_d2drx(std::stoi(from.substr(5)), std::stoi(to.substr(5)), n) = gain;
    } else if (from.rfind("ue", 0) == 0 && to.rfind("d2drx", 0) == 0) {
      cs.ue_to_d2drx(std::stoi(from.substr(2)), std::stoi(to.substr(5)), n) = gain;
    } else {
      throw ChannelError("unknown link id: " + link);
    }
    ++rows;
  }
  if (rows == 0) throw ChannelError("channel CSV has no data rows");
  cs.refresh_derived();
  return cs;
}

}  // namespace relaymatch

#include "relaymatch/topology.hpp"

#include <cmath>
#include <limits>

#include "relaymatch/rng.hpp"

namespace relaymatch {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool inside(const NetworkConfig& cfg, const Point& p) {
  return p.x >= 0.0 && p.x <= cfg.cell_side_m && p.y >= 0.0 && p.y <= cfg.cell_side_m;
}

Point sample_in_disc(Random& rng, const NetworkConfig& cfg, const Point& center, double radius) {
  for (int tries = 0; tries < 4096; ++tries) {
    const double r = radius * std::sqrt(rng.uniform());
    const double a = kTwoPi * rng.uniform();
    Point p{center.x + r * std::cos(a), center.y + r * std::sin(a)};
    if (inside(cfg, p)) return p;
  }
  throw ConfigError("d_rd_m disc does not fit inside the cell");
}

Point sample_on_circle(Random& rng, const NetworkConfig& cfg, const Point& center, double radius) {
  for (int tries = 0; tries < 4096; ++tries) {
    const double a = kTwoPi * rng.uniform();
    Point p{center.x + radius * std::cos(a), center.y + radius * std::sin(a)};
    if (inside(cfg, p)) return p;
  }
  throw ConfigError("d_dd_m circle does not fit inside the cell");
}

}  // namespace

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Topology generate_topology(const NetworkConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Random rng(mix_seed(seed, 1));  // stream tag 1: topology

  Topology topo;
  const Point center{cfg.cell_side_m / 2.0, cfg.cell_side_m / 2.0};
  const double ring = cfg.cell_side_m / 4.0;
  for (int l = 0; l < cfg.num_relays; ++l) {
    const double a = kTwoPi * l / cfg.num_relays;
    topo.relay_positions.push_back({center.x + ring * std::cos(a), center.y + ring * std::sin(a)});
  }

  for (int c = 0; c < cfg.num_cues; ++c) {
    UeRecord ue;
    ue.kind = UeKind::Cue;
    ue.pos = {rng.uniform(0.0, cfg.cell_side_m), rng.uniform(0.0, cfg.cell_side_m)};
    topo.ues.push_back(ue);
  }

  for (int d = 0; d < cfg.num_d2d_pairs; ++d) {
    UeRecord ue;
    ue.kind = UeKind::D2dTx;
    const Point& anchor = topo.relay_positions[static_cast<std::size_t>(d % cfg.num_relays)];
    ue.pos = sample_in_disc(rng, cfg, anchor, cfg.d_rd_m);
    ue.d2d_rx_pos = sample_on_circle(rng, cfg, ue.pos, cfg.d_dd_m);
    topo.ues.push_back(ue);
  }

  topo.relay_ues.assign(static_cast<std::size_t>(cfg.num_relays), {});
  for (int u = 0; u < topo.num_ues(); ++u) {
    auto& ue = topo.ues[static_cast<std::size_t>(u)];
    double best = std::numeric_limits<double>::infinity();
    for (int l = 0; l < cfg.num_relays; ++l) {
      const double d = distance(ue.pos, topo.relay_positions[static_cast<std::size_t>(l)]);
      if (d < best) {
        best = d;
        ue.serving_relay = l;
      }
    }
    topo.relay_ues[static_cast<std::size_t>(ue.serving_relay)].push_back(u);
  }
  return topo;
}

}  // namespace relaymatch

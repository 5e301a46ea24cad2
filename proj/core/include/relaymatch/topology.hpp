#pragma once

#include <cstdint>
#include <vector>

#include "relaymatch/config.hpp"

namespace relaymatch {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

enum class UeKind { Cue, D2dTx };

struct UeRecord {
  UeKind kind = UeKind::Cue;
  Point pos;
  Point d2d_rx_pos;  // valid for D2dTx only
  int serving_relay = -1;
};

// One cell snapshot: relays on a circle of radius cell_side/4, CUEs uniform in
// the cell, D2D transmitters clustered in discs around the relays, receivers
// at exactly d_dd_m from their transmitter. UE ids are 0..C-1 for CUEs and
// C..C+D-1 for D2D transmitters; d2d pair id = ue - C.
struct Topology {
  std::vector<Point> relay_positions;
  std::vector<UeRecord> ues;
  std::vector<std::vector<int>> relay_ues;  // association partition

  int num_relays() const { return static_cast<int>(relay_positions.size()); }
  int num_ues() const { return static_cast<int>(ues.size()); }
  bool is_d2d(int ue) const { return ues[static_cast<std::size_t>(ue)].kind == UeKind::D2dTx; }
  int d2d_pair_of(int ue, int num_cues) const { return ue - num_cues; }
};

// Pure function of (cfg, seed). Association picks the relay with the lowest
// path loss (strongest expected hop-1 gain).
Topology generate_topology(const NetworkConfig& cfg, std::uint64_t seed);

}  // namespace relaymatch

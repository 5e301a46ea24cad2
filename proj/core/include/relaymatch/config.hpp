#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace relaymatch {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Experiment configuration. Counts and geometry describe one cell; power and
// interference limits are stored in dBm as configured, with watt accessors.
struct NetworkConfig {
  double cell_side_m = 700.0;
  int num_relays = 3;
  int num_cues = 9;
  int num_d2d_pairs = 6;
  double d_rd_m = 50.0;   // max radius: D2D transmitter around its relay
  double d_dd_m = 50.0;   // exact transmitter-receiver separation
  int rb_count = 12;
  double rb_bandwidth_hz = 180e3;
  double noise_psd = -174.0;  // dBm/Hz
  double p_max_ue_dbm = 23.0;
  double p_max_relay_dbm = 30.0;
  double i_th1_dbm = -70.0;
  double i_th2_dbm = -70.0;
  double q_min_cue_bps = 128e3;
  double q_min_d2d_bps = 128e3;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double xi3 = 0.0;
  double xi4 = 0.0;
  int t_max = 50;
  double epsilon = 100.0;  // bit/s
  int realizations = 200;
  std::uint64_t seed = 1;

  // propagation model knobs
  double pl_ref_db = 37.0;        // loss at 1 m
  double pl_exponent_ue = 3.5;    // links with a UE endpoint
  double pl_exponent_relay = 3.0; // relay <-> eNB links
  double shadowing_db = 8.0;      // log-normal std dev

  double sigma2() const { return dbm_to_watt(noise_psd) * rb_bandwidth_hz; }
  double p_max_ue_w() const { return dbm_to_watt(p_max_ue_dbm); }
  double p_max_relay_w() const { return dbm_to_watt(p_max_relay_dbm); }
  double i_th1_w() const { return dbm_to_watt(i_th1_dbm); }
  double i_th2_w() const { return dbm_to_watt(i_th2_dbm); }
  int num_ues() const { return num_cues + num_d2d_pairs; }

  // throws ConfigError on any invariant violation
  void validate() const;
};

// Parses a JSON document with the NetworkConfig key names. Missing optional
// keys take the defaults above; num_relays, num_cues, num_d2d_pairs and
// rb_count are required. q_min_bps accepts either a number (both classes) or
// {"cue": ..., "d2d": ...}.
NetworkConfig load_config(const std::string& json_text);
NetworkConfig load_config_file(const std::string& path);

}  // namespace relaymatch

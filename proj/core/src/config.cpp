#include "relaymatch/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace relaymatch {

namespace {

using nlohmann::json;

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
}

void require_count(int v, const char* name) {
  if (v < 1) throw ConfigError(std::string(name) + " must be >= 1");
}

void require_xi(double v, const char* name) {
  if (v < 0.0 || v >= 1.0)
    throw ConfigError(std::string(name) + " must lie in [0, 1) (fraction of nominal)");
}

}  // namespace

void NetworkConfig::validate() const {
  require_count(num_relays, "num_relays");
  require_count(num_cues, "num_cues");
  require_count(num_d2d_pairs, "num_d2d_pairs");
  require_count(rb_count, "rb_count");
  require_count(t_max, "t_max");
  require_count(realizations, "realizations");
  require_positive(cell_side_m, "cell_side_m");
  require_positive(d_rd_m, "d_rd_m");
  require_positive(d_dd_m, "d_dd_m");
  require_positive(rb_bandwidth_hz, "rb_bandwidth_hz");
  require_positive(sigma2(), "noise_psd");
  require_positive(p_max_ue_w(), "p_max_ue_dbm");
  require_positive(p_max_relay_w(), "p_max_relay_dbm");
  require_positive(i_th1_w(), "i_th1_dbm");
  require_positive(i_th2_w(), "i_th2_dbm");
  require_positive(q_min_cue_bps, "q_min_bps.cue");
  require_positive(q_min_d2d_bps, "q_min_bps.d2d");
  require_positive(epsilon, "epsilon");
  require_xi(xi1, "xi1");
  require_xi(xi2, "xi2");
  require_xi(xi3, "xi3");
  require_xi(xi4, "xi4");
}

NetworkConfig load_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");

  NetworkConfig cfg;
  for (const char* key : {"num_relays", "num_cues", "num_d2d_pairs", "rb_count"}) {
    if (!doc.contains(key)) throw ConfigError(std::string(key) + " required");
  }

  auto num = [&](const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
    return doc[key].get<double>();
  };
  auto integer = [&](const char* key, int fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc[key].is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
    return doc[key].get<int>();
  };

  cfg.num_relays = integer("num_relays", cfg.num_relays);
  cfg.num_cues = integer("num_cues", cfg.num_cues);
  cfg.num_d2d_pairs = integer("num_d2d_pairs", cfg.num_d2d_pairs);
  cfg.rb_count = integer("rb_count", cfg.rb_count);
  cfg.t_max = integer("t_max", cfg.t_max);
  cfg.realizations = integer("realizations", cfg.realizations);
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();

  cfg.cell_side_m = num("cell_side_m", cfg.cell_side_m);
  cfg.d_rd_m = num("d_rd_m", cfg.d_rd_m);
  cfg.d_dd_m = num("d_dd_m", cfg.d_dd_m);
  cfg.rb_bandwidth_hz = num("rb_bandwidth_hz", cfg.rb_bandwidth_hz);
  cfg.noise_psd = num("noise_psd", cfg.noise_psd);
  cfg.p_max_ue_dbm = num("p_max_ue_dbm", cfg.p_max_ue_dbm);
  cfg.p_max_relay_dbm = num("p_max_relay_dbm", cfg.p_max_relay_dbm);
  cfg.i_th1_dbm = num("i_th1_dbm", cfg.i_th1_dbm);
  cfg.i_th2_dbm = num("i_th2_dbm", cfg.i_th2_dbm);
  cfg.xi1 = num("xi1", cfg.xi1);
  cfg.xi2 = num("xi2", cfg.xi2);
  cfg.xi3 = num("xi3", cfg.xi3);
  cfg.xi4 = num("xi4", cfg.xi4);
  cfg.epsilon = num("epsilon", cfg.epsilon);
  cfg.pl_ref_db = num("pl_ref_db", cfg.pl_ref_db);
  cfg.pl_exponent_ue = num("pl_exponent_ue", cfg.pl_exponent_ue);
  cfg.pl_exponent_relay = num("pl_exponent_relay", cfg.pl_exponent_relay);
  cfg.shadowing_db = num("shadowing_db", cfg.shadowing_db);

  if (doc.contains("q_min_bps")) {
    const auto& q = doc["q_min_bps"];
    if (q.is_number()) {
      cfg.q_min_cue_bps = cfg.q_min_d2d_bps = q.get<double>();
    } else if (q.is_object()) {
      if (q.contains("cue")) cfg.q_min_cue_bps = q["cue"].get<double>();
      if (q.contains("d2d")) cfg.q_min_d2d_bps = q["d2d"].get<double>();
    } else {
      throw ConfigError("q_min_bps must be a number or {cue, d2d} object");
    }
  }

  cfg.validate();
  return cfg;
}

NetworkConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

}  // namespace relaymatch

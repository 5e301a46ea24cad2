#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "relaymatch/rates.hpp"

using namespace relaymatch;

namespace {

// hand-built two-relay cell with unit noise; every gain defaults to a small
// positive value and tests override the links they care about
struct Synth {
  NetworkConfig cfg;
  Topology topo;
  ChannelState ch;
  NetworkAllocation alloc;

  Synth(int relays, int cues, int pairs, int rbs, double bandwidth = 1.0) {
    cfg.num_relays = relays;
    cfg.num_cues = cues;
    cfg.num_d2d_pairs = pairs;
    cfg.rb_count = rbs;
    cfg.rb_bandwidth_hz = bandwidth;
    cfg.noise_psd = 30.0 - 10.0 * std::log10(bandwidth);  // sigma2 = 1 W
    cfg.p_max_ue_dbm = 90.0;                              // keep budgets out of the way
    cfg.p_max_relay_dbm = 90.0;
    cfg.i_th1_dbm = 90.0;
    cfg.i_th2_dbm = 90.0;
    cfg.q_min_cue_bps = cfg.q_min_d2d_bps = 1.0;

    const int total = cues + pairs;
    for (int l = 0; l < relays; ++l)
      topo.relay_positions.push_back({100.0 * l, 0.0});
    for (int u = 0; u < total; ++u) {
      UeRecord ue;
      ue.kind = u < cues ? UeKind::Cue : UeKind::D2dTx;
      ue.pos = {10.0 * u, 10.0};
      ue.d2d_rx_pos = {10.0 * u, 20.0};
      ue.serving_relay = u % relays;
      topo.ues.push_back(ue);
    }
    topo.relay_ues.assign(static_cast<std::size_t>(relays), {});
    for (int u = 0; u < total; ++u)
      topo.relay_ues[static_cast<std::size_t>(u % relays)].push_back(u);

    ch = ChannelState(cfg, topo);
    for (int u = 0; u < total; ++u)
      for (int l = 0; l < relays; ++l)
        for (int n = 0; n < rbs; ++n) ch.ue_to_relay(u, l, n) = 1e-3;
    for (int l = 0; l < relays; ++l)
      for (int n = 0; n < rbs; ++n) ch.relay_to_enb(l, n) = 1e-3;
    for (int l = 0; l < relays; ++l)
      for (int d = 0; d < pairs; ++d)
        for (int n = 0; n < rbs; ++n) ch.relay_to_d2drx(l, d, n) = 1e-3;
    for (int u = 0; u < total; ++u)
      for (int d = 0; d < pairs; ++d)
        for (int n = 0; n < rbs; ++n) ch.ue_to_d2drx(u, d, n) = 1e-3;
    alloc = NetworkAllocation::zero(total, rbs);
  }

  void refresh() { ch.refresh_derived(); }
  RateContext ctx() const { return RateContext(ch, alloc); }
  void assign(int u, int n, double p) {
    alloc.x[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] = 1;
    alloc.p_cand[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] = p;
  }
};

}  // namespace

TEST_CASE("hop-1 unit SINR: noise-only, one interferer, linear in gain") {
  Synth s(2, 2, 0, 1);
  s.ch.ue_to_relay(0, 0, 0) = 1.0;  // ue0 -> its relay
  s.refresh();
  CHECK(unit_sinr(s.ctx(), 0, 0, 1) == doctest::Approx(1.0));  // h/(sigma2)=1/1

  // cross-relay interferer with x*P*g = 1.2
  s.ch.ue_to_relay(1, 0, 0) = 0.6;
  s.assign(1, 0, 2.0);
  s.refresh();
  CHECK(unit_sinr(s.ctx(), 0, 0, 1) == doctest::Approx(1.0 / 2.2));

  s.ch.ue_to_relay(0, 0, 0) = 2.0;
  s.refresh();
  CHECK(unit_sinr(s.ctx(), 0, 0, 1) == doctest::Approx(2.0 / 2.2));
}

TEST_CASE("closed-form rate: unity received SNR gives half a bit per RB") {
  Synth s(1, 1, 0, 1, 180e3);
  s.ch.ue_to_relay(0, 0, 0) = 1.0;
  s.refresh();
  s.assign(0, 0, 1.0);  // P * gamma1 = 1
  CHECK(e2e_rb_rate(s.ctx(), 0, 0) == doctest::Approx(90e3));
}

TEST_CASE("two-hop rate is half the weaker hop") {
  Synth s(1, 1, 0, 1, 1e6);
  s.ch.ue_to_relay(0, 0, 0) = 1.0;
  s.ch.relay_to_enb(0, 0) = 1.0;
  s.refresh();
  // r1 = 2 Mbit/s (p1*gamma1 = 3), r2 = 4 Mbit/s (p2*gamma2 = 15)
  CHECK(two_hop_rate(s.ctx(), 0, 0, 3.0, 15.0) == doctest::Approx(1e6));
}

TEST_CASE("raw two-hop form equals the closed form under the equal-rate power split") {
  std::mt19937_64 eng(19);
  std::uniform_real_distribution<double> g(1e-4, 1.0), pw(0.01, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Synth s(2, 2, 2, 2);
    for (int u = 0; u < 4; ++u)
      for (int l = 0; l < 2; ++l)
        for (int n = 0; n < 2; ++n) s.ch.ue_to_relay(u, l, n) = g(eng);
    for (int l = 0; l < 2; ++l)
      for (int n = 0; n < 2; ++n) s.ch.relay_to_enb(l, n) = g(eng);
    for (int l = 0; l < 2; ++l)
      for (int d = 0; d < 2; ++d)
        for (int n = 0; n < 2; ++n) s.ch.relay_to_d2drx(l, d, n) = g(eng);
    s.refresh();
    for (int u = 0; u < 4; ++u) s.assign(u, u % 2, pw(eng));
    const auto ctx = s.ctx();
    for (int u = 0; u < 4; ++u) {
      const int n = u % 2;
      const double p1 = s.alloc.p1(u, n);
      const double ratio = unit_sinr(ctx, u, n, 1) / unit_sinr(ctx, u, n, 2);
      const double raw = two_hop_rate(ctx, u, n, p1, ratio * p1);
      const double closed = e2e_rb_rate(ctx, u, n);
      REQUIRE(raw == doctest::Approx(closed).epsilon(1e-9));
    }
  }
}

TEST_CASE("worst-case rate: hand value and limits") {
  Synth s(2, 2, 0, 1);
  s.ch.ue_to_relay(0, 0, 0) = 1.0;  // own gain 1
  s.ch.ue_to_relay(1, 0, 0) = 0.5;  // interferer nominal gain
  s.cfg.xi1 = 0.2;                  // radius = 0.2 * |F| = 0.2 * 0.5 = 0.1
  s.ch = s.ch.with_config(s.cfg);
  s.assign(0, 0, 1.0);
  s.assign(1, 0, 2.0);
  CHECK(s.ch.xi1_radius(0, 0) == doctest::Approx(0.1));
  // denominator: 0.5*2 + 1*0.1*2 + 1 = 2.2
  const double rate = robust_rb_rate(s.ctx(), 0, 0);
  CHECK(rate == doctest::Approx(0.5 * std::log2(1.0 + 1.0 / 2.2)));
  CHECK(rate == doctest::Approx(0.270278).epsilon(1e-4));

  // zero uncertainty collapses to the nominal rate
  s.cfg.xi1 = 0.0;
  s.ch = s.ch.with_config(s.cfg);
  CHECK(robust_rb_rate(s.ctx(), 0, 0) == doctest::Approx(e2e_rb_rate(s.ctx(), 0, 0)));

  // growing bound never raises the rate
  double prev = 1e300;
  for (double xi : {0.0, 0.1, 0.3, 0.6, 0.9}) {
    s.cfg.xi1 = xi;
    s.ch = s.ch.with_config(s.cfg);
    const double r = robust_rb_rate(s.ctx(), 0, 0);
    CHECK(r <= prev + 1e-15);
    prev = r;
  }
}

TEST_CASE("direct D2D rate: no half factor, CUE rejected") {
  Synth s(1, 1, 1, 1, 180e3);
  const int tx = 1;
  s.ch.ue_to_d2drx(tx, 0, 0) = 1.0;  // direct link
  s.ch.ue_to_relay(tx, 0, 0) = 1.0;  // relay path at the same unit SINR
  s.refresh();
  s.assign(tx, 0, 1.0);  // P * gamma = 1
  CHECK(direct_d2d_rate(s.ctx(), tx, 0) == doctest::Approx(180e3));
  CHECK(direct_d2d_rate(s.ctx(), tx, 0) == doctest::Approx(2.0 * e2e_rb_rate(s.ctx(), tx, 0)));
  CHECK_THROWS_AS(direct_d2d_rate(s.ctx(), 0, 0), ChannelError);
}

TEST_CASE("rates vanish without power") {
  Synth s(2, 2, 2, 2);
  s.refresh();
  const auto ctx = s.ctx();
  for (int u = 0; u < 4; ++u)
    for (int n = 0; n < 2; ++n) {
      CHECK(e2e_rb_rate(ctx, u, n) == 0.0);
      CHECK(robust_rb_rate(ctx, u, n) == 0.0);
    }
}

TEST_CASE("constraint report: exact budget passes with zero slack") {
  Synth s(1, 1, 0, 4);
  s.cfg.p_max_ue_dbm = 30.0;  // 1 W
  s.ch = s.ch.with_config(s.cfg);
  for (int n = 0; n < 4; ++n) s.assign(0, n, 0.25);
  const auto report = check_constraints(s.ctx(), RateMode::Nominal);
  for (const auto& c : report.checks)
    if (c.family == ConstraintFamily::UePowerBudget) {
      CHECK(c.pass);
      CHECK(c.slack == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("constraint report: robust margin can break a nominally tight budget") {
  Synth s(2, 2, 0, 1);
  s.cfg.p_max_relay_dbm = 30.0;  // 1 W
  s.cfg.xi2 = 0.25;
  s.ch.ue_to_relay(0, 0, 0) = 1.0;
  s.ch.relay_to_enb(0, 0) = 1.0;  // hop ratio 1
  s.ch = s.ch.with_config(s.cfg);
  s.assign(0, 0, 1.0);  // nominal relay load exactly 1 W
  const auto nominal = check_constraints(s.ctx(), RateMode::Nominal);
  CHECK(nominal.family_pass(ConstraintFamily::RelayPowerBudget));
  const auto robust = check_constraints(s.ctx(), RateMode::Robust);
  CHECK_FALSE(robust.family_pass(ConstraintFamily::RelayPowerBudget));
}

TEST_CASE("property: zero bounds make robust and nominal reports identical") {
  std::mt19937_64 eng(23);
  std::uniform_real_distribution<double> g(1e-4, 1.0), pw(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    Synth s(2, 3, 2, 3);
    for (int u = 0; u < 5; ++u)
      for (int l = 0; l < 2; ++l)
        for (int n = 0; n < 3; ++n) s.ch.ue_to_relay(u, l, n) = g(eng);
    for (int l = 0; l < 2; ++l)
      for (int n = 0; n < 3; ++n) s.ch.relay_to_enb(l, n) = g(eng);
    for (int l = 0; l < 2; ++l)
      for (int d = 0; d < 2; ++d)
        for (int n = 0; n < 3; ++n) s.ch.relay_to_d2drx(l, d, n) = g(eng);
    s.refresh();
    for (int n = 0; n < 3; ++n) {
      const int u = static_cast<int>(eng() % 5);
      s.assign(u, n, pw(eng));
    }
    const auto a = check_constraints(s.ctx(), RateMode::Nominal);
    const auto b = check_constraints(s.ctx(), RateMode::Robust);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
      REQUIRE(a.checks[i].pass == b.checks[i].pass);
      REQUIRE(a.checks[i].lhs == doctest::Approx(b.checks[i].lhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: sampled perturbations never beat the worst-case bound") {
  NetworkConfig cfg;
  cfg.num_relays = 2;
  cfg.num_cues = 4;
  cfg.num_d2d_pairs = 2;
  cfg.rb_count = 3;
  cfg.xi1 = cfg.xi2 = cfg.xi3 = cfg.xi4 = 0.25;
  const auto topo = generate_topology(cfg, 31);
  const auto ch = sample_link_gains(topo, cfg, 31);
  auto alloc = NetworkAllocation::zero(cfg.num_ues(), cfg.rb_count);
  std::mt19937_64 eng(5);
  for (int l = 0; l < 2; ++l)
    for (int n = 0; n < 3; ++n) {
      const auto& ues = topo.relay_ues[static_cast<std::size_t>(l)];
      const int u = ues[eng() % ues.size()];
      alloc.x[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] = 1;
      alloc.p_cand[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] = 1e-6;
    }
  const RateContext nominal_ctx(ch, alloc);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto pert = sample_perturbation(ch, seed);
    const RateContext pert_ctx(ch, alloc, &pert);
    for (int u = 0; u < cfg.num_ues(); ++u)
      for (int n = 0; n < cfg.rb_count; ++n) {
        if (!alloc.assigned(u, n)) continue;
        REQUIRE(e2e_rb_rate(pert_ctx, u, n) >=
                robust_rb_rate(nominal_ctx, u, n) * (1.0 - 1e-12));
      }
  }
}

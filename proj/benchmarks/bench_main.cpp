#include <benchmark/benchmark.h>

#include <random>

#include "relaymatch/allocator.hpp"
#include "relaymatch/matching.hpp"

namespace {

using namespace relaymatch;

UtilityMatrix random_matrix(std::mt19937_64& eng, int ues, int rbs) {
  UtilityMatrix m(ues, rbs);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  for (auto& v : m.v) v = dist(eng);
  return m;
}

void BM_build_preferences(benchmark::State& state) {
  std::mt19937_64 eng(1);
  const int side = static_cast<int>(state.range(0));
  const auto m = random_matrix(eng, side, side);
  for (auto _ : state) {
    auto p = build_preferences(m);
    benchmark::DoNotOptimize(p);
  }
  state.SetComplexityN(side);
}
BENCHMARK(BM_build_preferences)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_allocate_rbs(benchmark::State& state) {
  std::mt19937_64 eng(2);
  const int side = static_cast<int>(state.range(0));
  const auto m = random_matrix(eng, side, side);
  const auto profiles = build_preferences(m);
  Quota quota;
  quota.kappa.assign(static_cast<std::size_t>(side), 1);
  quota.capped.assign(static_cast<std::size_t>(side), 0);
  for (auto _ : state) {
    auto res = allocate_rbs(profiles, quota);
    benchmark::DoNotOptimize(res);
  }
  state.SetComplexityN(2 * side * side);  // beta: total profile length
}
BENCHMARK(BM_allocate_rbs)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oN);

void BM_utility_matrix(benchmark::State& state) {
  NetworkConfig cfg;
  cfg.num_relays = 3;
  cfg.num_cues = 15;
  cfg.num_d2d_pairs = 9;
  cfg.rb_count = static_cast<int>(state.range(0));
  cfg.xi1 = cfg.xi2 = cfg.xi3 = cfg.xi4 = 0.25;
  const auto topo = generate_topology(cfg, 1);
  const auto ch = sample_link_gains(topo, cfg, 1);
  auto alloc = NetworkAllocation::zero(cfg.num_ues(), cfg.rb_count);
  for (int u = 0; u < cfg.num_ues(); ++u)
    for (int n = 0; n < cfg.rb_count; ++n)
      alloc.p_cand[static_cast<std::size_t>(u)][static_cast<std::size_t>(n)] =
          cfg.p_max_ue_w() / cfg.rb_count;
  const RateContext ctx(ch, alloc);
  for (auto _ : state) {
    auto util = build_utility_matrix(ctx, 0);
    benchmark::DoNotOptimize(util);
  }
}
BENCHMARK(BM_utility_matrix)->Arg(12)->Arg(25)->Arg(50);

void BM_network_iteration(benchmark::State& state) {
  NetworkConfig cfg;
  cfg.num_relays = 3;
  cfg.num_cues = 15;
  cfg.num_d2d_pairs = 9;
  cfg.rb_count = 12;
  cfg.xi1 = cfg.xi2 = cfg.xi3 = cfg.xi4 = 0.25;
  cfg.t_max = 1;
  const auto topo = generate_topology(cfg, 1);
  const auto ch = sample_link_gains(topo, cfg, 1);
  for (auto _ : state) {
    auto run = run_network(cfg, topo, ch);
    benchmark::DoNotOptimize(run);
  }
}
BENCHMARK(BM_network_iteration);

}  // namespace

BENCHMARK_MAIN();

#include <random>

#include <benchmark/benchmark.h>

#include "chyp/cr_metrics.hpp"
#include "chyp/dirichlet.hpp"

using namespace chyp;

namespace {

HeisIsometry tr(cplx xi, double v) { return HeisIsometry::translation({CVec::Constant(1, xi), v}); }

std::vector<HPoint> boundary_points(std::size_t m, int n) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<HPoint> out;
  for (std::size_t i = 0; i < m; ++i) {
    CVec xi(n - 1);
    for (int k = 0; k < n - 1; ++k) xi(k) = {u(rng), u(rng)};
    out.push_back(HPoint::finite(xi, u(rng), 0.0));
  }
  return out;
}

void BM_CyganDist(benchmark::State& s) {
  const auto p = boundary_points(256, static_cast<int>(s.range(0)));
  std::size_t i = 0;
  for (auto _ : s) {
    benchmark::DoNotOptimize(cygan_dist(p[i % 256], p[(i + 1) % 256]));
    ++i;
  }
}
BENCHMARK(BM_CyganDist)->Arg(2)->Arg(4);

void BM_BergmanDistance(benchmark::State& s) {
  const HPoint a = HPoint::finite(CVec::Constant(1, cplx(0.3, -0.2)), 0.4, 1.2);
  const HPoint b = HPoint::finite(CVec::Constant(1, cplx(-1.0, 0.5)), 2.0, 0.3);
  for (auto _ : s) benchmark::DoNotOptimize(bergman_distance(a, b));
}
BENCHMARK(BM_BergmanDistance);

void BM_Enumerate(benchmark::State& s) {
  const GroupSpec g = GroupSpec::from_heis({tr(1.0, 0.0), tr(0.0, 1.0)});
  const int L = static_cast<int>(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(enumerate_elements(g, L).size());
}
BENCHMARK(BM_Enumerate)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_DirichletSides(benchmark::State& s) {
  const GroupSpec g = GroupSpec::from_heis({tr(1.0, 0.0), tr(0.0, 1.0)});
  const ElementTable t = enumerate_elements(g, static_cast<int>(s.range(0)));
  DirichletOptions opt;
  opt.rays = 2000;
  opt.check_stability = false;
  opt.threads = static_cast<int>(s.range(1));
  const HPoint y = HPoint::finite(CVec::Zero(1), 0.0, 1.0);
  for (auto _ : s) benchmark::DoNotOptimize(dirichlet_sides(t, y, opt).face_count());
}
BENCHMARK(BM_DirichletSides)->Args({2, 1})->Args({4, 1})->Args({4, 4})->Unit(benchmark::kMillisecond);

void BM_CrossRatioAudit(benchmark::State& s) {
  std::vector<PointPair> pairs;
  for (const HPoint& p : boundary_points(64, 2)) pairs.push_back({p, HPoint::finite(2.0 * p.xi(), 4.0 * p.v(), 0.0)});
  CRAuditOptions opt;
  opt.quads = 20000;
  opt.threads = static_cast<int>(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(quasi_cr_audit(pairs, opt).quads_used);
}
BENCHMARK(BM_CrossRatioAudit)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_MuDensity(benchmark::State& s) {
  const auto pts = boundary_points(static_cast<std::size_t>(s.range(0)), 2);
  for (auto _ : s) benchmark::DoNotOptimize(mu_density(pts, 2.0).dense);
}
BENCHMARK(BM_MuDensity)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

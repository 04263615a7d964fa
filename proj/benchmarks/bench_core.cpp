#include "charm/catalog.hpp"
#include "charm/harmonic.hpp"
#include "charm/liealg.hpp"

#include <benchmark/benchmark.h>

using namespace charm;

namespace {

void bm_jet_multiply(benchmark::State& state) {
  const int nvars = static_cast<int>(state.range(0));
  geom::Jet a = geom::Jet::variable(1.3, 0, nvars);
  geom::Jet b = geom::Jet::variable(0.7, nvars - 1, nvars);
  a = sin(a) + b * b;
  b = exp(b) - a;
  for (auto _ : state) {
    geom::Jet c = a * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(bm_jet_multiply)->Arg(3)->Arg(5)->Arg(7);

void bm_geometry_context(benchmark::State& state) {
  catalog::Built b = catalog::build("sasakian-sphere", {.n = 2});
  acs::AlmostContactStructure s = catalog::structure_of(b);
  Eigen::VectorXd x = catalog::box_of(b).sample(1, 5).col(0);
  for (auto _ : state) {
    geom::GeometryContext ctx(s.model(), x);
    benchmark::DoNotOptimize(ctx.scalar_curvature());
  }
}
BENCHMARK(bm_geometry_context);

void bm_point_residuals(benchmark::State& state) {
  catalog::Built b = catalog::build("nearly-cosymplectic-s5");
  acs::AlmostContactStructure s = catalog::structure_of(b);
  Eigen::VectorXd x = catalog::box_of(b).sample(1, 9).col(0);
  for (auto _ : state) {
    acs::PointData pd = acs::analyze(s, x);
    Eigen::VectorXd r = harmonic::section_residual(pd);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(bm_point_residuals);

void bm_skew_decompose(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int m = liealg::structure_dim(k);
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = std::sin(3.0 * i + j);
  a -= Eigen::MatrixXd(a.transpose());
  for (auto _ : state) {
    liealg::SkewDecomposition d = liealg::decompose(a);
    benchmark::DoNotOptimize(d.m2);
  }
}
BENCHMARK(bm_skew_decompose)->Arg(1)->Arg(2)->Arg(3);

} // namespace

BENCHMARK_MAIN();

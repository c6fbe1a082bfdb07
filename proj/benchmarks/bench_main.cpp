#include <benchmark/benchmark.h>

#include <vector>

#include "typeb/clt.hpp"
#include "typeb/coxeter.hpp"
#include "typeb/fock.hpp"
#include "typeb/spins.hpp"
#include "typeb/wick.hpp"

namespace {

void BM_TypeBScalar(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(typeb::typeB_moment_scalar(order));
}
BENCHMARK(BM_TypeBScalar)->DenseRange(4, 12, 4);

Eigen::MatrixXd diag_pi0() {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(2, 2);
  p(1, 1) = -1;
  return p;
}

void BM_SymmetrizerGroupSum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(typeb::symmetrizer(n, 2, diag_pi0(), 0.5, 0.3));
}
BENCHMARK(BM_SymmetrizerGroupSum)->DenseRange(2, 4);

void BM_SymmetrizerFactorized(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(typeb::symmetrizer_factorized(n, 2, diag_pi0(), 0.5, 0.3));
  }
}
BENCHMARK(BM_SymmetrizerFactorized)->DenseRange(2, 6, 2);

void BM_FockGaussianMoment(benchmark::State& state) {
  typeb::FockSpaceConfig cfg;
  cfg.d = 2;
  cfg.max_level = 6;
  cfg.alpha = 0.5;
  cfg.q = 0.3;
  cfg.pi0 = diag_pi0();
  const typeb::FockSpace fs(cfg);
  Eigen::VectorXd x(2), y(2);
  x << 1.0, 0.5;
  y << -0.3, 1.0;
  const std::vector<Eigen::VectorXd> word = {x, y, x, x, y, y};
  for (auto _ : state) benchmark::DoNotOptimize(fs.gaussian_moment(word));
}
BENCHMARK(BM_FockGaussianMoment);

void BM_FixedSignMoment(benchmark::State& state) {
  typeb::CltConfig cfg;
  cfg.N = static_cast<int>(state.range(0));
  cfg.k = 4;
  cfg.q = 0.5;
  cfg.rho = 0.3;
  cfg.method = typeb::Method::class_enumeration;
  for (auto _ : state) benchmark::DoNotOptimize(typeb::moment_fixed_signs_exact(cfg));
}
BENCHMARK(BM_FixedSignMoment)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_FullEnumeration(benchmark::State& state) {
  typeb::CltConfig cfg;
  cfg.N = static_cast<int>(state.range(0));
  cfg.k = 4;
  cfg.q = 0.5;
  cfg.rho = 0.3;
  cfg.method = typeb::Method::full_enumeration;
  for (auto _ : state) benchmark::DoNotOptimize(typeb::moment_fixed_signs_exact(cfg));
}
BENCHMARK(BM_FullEnumeration)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ExpectedMomentExact(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  typeb::expectation_polynomials(k);  // warm the cache
  for (auto _ : state) benchmark::DoNotOptimize(typeb::expected_moment_exact(1000, k, 0.5, 0.3));
}
BENCHMARK(BM_ExpectedMomentExact)->Arg(4)->Arg(8);

void BM_EvalJw(benchmark::State& state) {
  const typeb::SignTable t(3, 0.4);
  const typeb::AbstractWord w = {{typeb::Kind::a, 1}, {typeb::Kind::b, 3}, {typeb::Kind::a, 2},
                                 {typeb::Kind::b, 1}, {typeb::Kind::a, 3}, {typeb::Kind::b, 2}};
  for (auto _ : state) benchmark::DoNotOptimize(typeb::eval_jw_word(w, t, 0.4, 3));
}
BENCHMARK(BM_EvalJw);

}  // namespace

BENCHMARK_MAIN();

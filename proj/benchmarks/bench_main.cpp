#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "mep/eulerian.hpp"
#include "mep/fft.hpp"
#include "mep/hamiltonian.hpp"
#include "mep/lagrangian.hpp"
#include "mep/presets.hpp"

namespace {

void BM_Fft(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  mep::Fft fft(n);
  std::vector<std::complex<double>> data(n, {1.0, 0.5});
  for (auto _ : st) {
    fft.forward(data);
    fft.inverse(data);
    benchmark::DoNotOptimize(data.data());
  }
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(64, 4096);

void BM_MepRhs(benchmark::State& st) {
  const mep::State s = mep::make_preset("analytic", mep::Grid(1, static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(mep::mep_rhs(s));
}
BENCHMARK(BM_MepRhs)->RangeMultiplier(4)->Range(64, 4096);

void BM_MepRhs2D(benchmark::State& st) {
  const mep::State s = mep::make_preset("analytic", mep::Grid(2, static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(mep::mep_rhs(s));
}
BENCHMARK(BM_MepRhs2D)->RangeMultiplier(2)->Range(32, 256);

void BM_EpRhs(benchmark::State& st) {
  const mep::State s = mep::make_preset("analytic", mep::Grid(1, static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(mep::ep_rhs(s));
}
BENCHMARK(BM_EpRhs)->Arg(256);

void BM_LagrangianRhs(benchmark::State& st) {
  const mep::State s = mep::make_preset("analytic", mep::Grid(1, static_cast<int>(st.range(0))));
  mep::FlowState f = mep::FlowState::identity(s);
  f = mep::rk4_step(f, 0.05);
  for (auto _ : st) benchmark::DoNotOptimize(mep::lagrangian_rhs(f));
}
BENCHMARK(BM_LagrangianRhs)->RangeMultiplier(2)->Range(64, 512);

void BM_H1(benchmark::State& st) {
  const mep::State s = mep::make_preset("analytic", mep::Grid(1, static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(mep::eval_functional(mep::FunctionalKind::H1, s));
}
BENCHMARK(BM_H1)->Arg(256);

}  // namespace

BENCHMARK_MAIN();

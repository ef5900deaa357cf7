#include <benchmark/benchmark.h>

#include "mta/closure.hpp"
#include "mta/generators.hpp"
#include "mta/oracle.hpp"
#include "mta/subspace.hpp"
#include "mta/tensor.hpp"

namespace {

void BM_TensorProduct(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  mta::MixedTensor h2 = mta::h_tensor(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mta::tensor_product(h2, h2));
  }
}
BENCHMARK(BM_TensorProduct)->Arg(2)->Arg(3)->Arg(4);

void BM_Contract(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  mta::MixedTensor x =
      mta::tensor_product(mta::h_tensor(n, 3), mta::star(mta::h_tensor(n, 3)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mta::contract(x, 1, 1));
  }
}
BENCHMARK(BM_Contract)->Arg(2)->Arg(3)->Arg(4);

void BM_Mutate(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  mta::MixedTensor x =
      mta::tensor_product(mta::h_tensor(n, 3), mta::star(mta::h_tensor(n, 3)));
  std::vector<int> sigma = {2, 3, 1};
  std::vector<int> tau = {3, 1, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mta::mutate(x, sigma, tau));
  }
}
BENCHMARK(BM_Mutate)->Arg(2)->Arg(3);

void BM_SpanInsertExact(benchmark::State& state) {
  int n = 3;
  std::vector<mta::MixedTensor> rows =
      mta::fft_spanning_set(mta::fft_catalog_entry(mta::parse_group_name("sn", n), 4),
                            n, 2, 2);
  for (auto _ : state) {
    mta::SpanBuilder sb(n, 2, 2, mta::ScalarMode::kExact);
    for (const mta::MixedTensor& r : rows) sb.add(r);
    benchmark::DoNotOptimize(sb.dim());
  }
}
BENCHMARK(BM_SpanInsertExact);

void BM_FftSpan(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  mta::GroupSpec g = mta::parse_group_name("sn", n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mta::fft_span(g, n, 2, 2, mta::ScalarMode::kExact));
  }
}
BENCHMARK(BM_FftSpan)->Arg(2)->Arg(3);

void BM_SmallClosure(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  std::vector<mta::MixedTensor> seeds = {mta::f_tensor(n),
                                         mta::star(mta::f_tensor(n))};
  mta::ClosureOptions opt;
  opt.cap_k = opt.cap_l = 2;
  opt.headroom = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mta::closure(seeds, opt));
  }
}
BENCHMARK(BM_SmallClosure)->Arg(2)->Arg(3);

void BM_ExactOracle(benchmark::State& state) {
  mta::GroupSpec g = mta::parse_group_name("sn", 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mta::invariant_space(g, 2, 2, mta::ScalarMode::kExact));
  }
}
BENCHMARK(BM_ExactOracle);

}  // namespace

BENCHMARK_MAIN();

#include "podles/axioms.hpp"

#include <benchmark/benchmark.h>

using namespace podles;

namespace {

const QParam kQ{0.5};

const SpectralData& big_data() {
  static SpectralData data = [] {
    BuildOptions opts;
    opts.convention = ConventionChoice{};
    return build_spectral_data(HilbertSpec{half_int(41)}, kQ, opts);
  }();
  return data;
}

}  // namespace

static void BM_dense_product_924(benchmark::State& state) {
  const SpectralData& data = big_data();
  for (auto _ : state) {
    LinearOperator c = data.pi.a * data.pi.b;
    benchmark::DoNotOptimize(c.at(0, 0));
  }
}
BENCHMARK(BM_dense_product_924)->Unit(benchmark::kMillisecond);

static void BM_op_norm_924(benchmark::State& state) {
  const SpectralData& data = big_data();
  LinearOperator c = commutator(data.pi.a, conjugate_by(data.real_structure, data.pi.b));
  for (auto _ : state) benchmark::DoNotOptimize(op_norm(c));
}
BENCHMARK(BM_op_norm_924)->Unit(benchmark::kMillisecond);

static void BM_build_spectral_data_41_2(benchmark::State& state) {
  BuildOptions opts;
  opts.convention = ConventionChoice{};
  for (auto _ : state) {
    SpectralData data = build_spectral_data(HilbertSpec{half_int(41)}, kQ, opts);
    benchmark::DoNotOptimize(data.dirac.at(0, 0));
  }
}
BENCHMARK(BM_build_spectral_data_41_2)->Unit(benchmark::kMillisecond);

static void BM_block_norms_924(benchmark::State& state) {
  const SpectralData& data = big_data();
  LinearOperator c = commutator(data.pi.a, conjugate_by(data.real_structure, data.pi.a));
  for (auto _ : state) {
    auto blocks = block_norms(c);
    benchmark::DoNotOptimize(blocks.size());
  }
}
BENCHMARK(BM_block_norms_924)->Unit(benchmark::kMillisecond);

static void BM_calibration_7_2(benchmark::State& state) {
  for (auto _ : state) {
    ConventionChoice conv = calibrate_conventions(HilbertSpec{half_int(7)}, kQ);
    benchmark::DoNotOptimize(conv.calibration_residual);
  }
}
BENCHMARK(BM_calibration_7_2)->Unit(benchmark::kMillisecond);

static void BM_relations_suite_21_2(benchmark::State& state) {
  BuildOptions opts;
  opts.convention = ConventionChoice{};
  SpectralData data = build_spectral_data(HilbertSpec{half_int(21)}, kQ, opts);
  for (auto _ : state) {
    VerificationReport rep = check_relations(data);
    benchmark::DoNotOptimize(rep.pass);
  }
}
BENCHMARK(BM_relations_suite_21_2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

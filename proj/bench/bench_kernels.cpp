// Serial reference kernels against their OpenMP counterparts on one synthetic corpus.
#include <benchmark/benchmark.h>

#include "numerosity/calibration.hpp"
#include "numerosity/kernels.hpp"
#include "numerosity/log.hpp"
#include "numerosity/serial.hpp"
#include "numerosity/synth.hpp"

using namespace numerosity;

namespace {

const SynthCorpus& corpus() {
  static const SynthCorpus c = [] {
    SynthConfig cfg;
    cfg.n_scenes = 4000;
    cfg.spurious_rate = 1.0;
    cfg.image_width = 320;
    cfg.image_height = 240;
    return generate(cfg);
  }();
  return c;
}

const std::vector<std::int64_t>& reference() {
  static const std::vector<std::int64_t> r = [] {
    std::vector<std::int64_t> out;
    for (const auto& s : corpus().annotations) out.push_back(static_cast<std::int64_t>(s.objects.size()));
    return out;
  }();
  return r;
}

std::vector<Bitmap> big_masks() {
  std::vector<Bitmap> masks(6, Bitmap(2048, 2048));
  for (int k = 0; k < 6; ++k) masks[k].fill_rect(k * 200, k * 150, 900 + k * 180, 1100 + k * 140);
  return masks;
}

void set_threads(const benchmark::State& state) { set_thread_count(static_cast<int>(state.range(0))); }

void BM_UnionAreaSerial(benchmark::State& state) {
  const auto masks = big_masks();
  for (auto _ : state) benchmark::DoNotOptimize(serial::union_area(masks));
}

void BM_UnionAreaParallel(benchmark::State& state) {
  set_threads(state);
  const auto masks = big_masks();
  for (auto _ : state) benchmark::DoNotOptimize(union_area(masks));
}

void BM_ExtractSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::extract_all(corpus().annotations).rows.size());
}

void BM_ExtractParallel(benchmark::State& state) {
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(extract_all(corpus().annotations).rows.size());
}

void BM_CalibrateSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::calibrate(corpus().detections, reference(), FilterConfig{}).best_tau);
}

void BM_CalibrateParallel(benchmark::State& state) {
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(calibrate(corpus().detections, reference(), FilterConfig{}).best_tau);
}

void thread_args(benchmark::internal::Benchmark* b) {
  for (int t = 1; t <= std::max(1, thread_count()); t *= 2) b->Arg(t);
  b->ArgName("threads")->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_UnionAreaSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UnionAreaParallel)->Apply(thread_args);
BENCHMARK(BM_ExtractSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractParallel)->Apply(thread_args);
BENCHMARK(BM_CalibrateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CalibrateParallel)->Apply(thread_args);

int main(int argc, char** argv) {
  set_warnings_enabled(false);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}

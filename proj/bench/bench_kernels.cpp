// Serial reference vs OpenMP kernels for the two Monte Carlo estimators and
// the region sweep.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "chaoswipt/analysis.hpp"
#include "chaoswipt/montecarlo.hpp"

using namespace chaoswipt;

namespace {

SimConfig ber_config() {
  SimConfig c;
  c.waveform = WaveformSpec::sr_dcsk(80, 20, 1.0);
  c.channel.fading = FadingKind::Nakagami;
  c.channel.m = 1.0;
  c.channel.gains = {0.5, 0.5};
  c.channel.noise_psd = noise_psd_for(db_to_linear(12.0), bit_energy(c.waveform), c.channel.path_loss());
  c.split = ReceiverSplit::make(2, 2);
  c.n_trials = 20000;
  return c;
}

SimConfig zdc_config() {
  SimConfig c;
  c.waveform = WaveformSpec::sr_dcsk(60, 10, 1.0);
  c.channel.fading = FadingKind::Nakagami;
  c.channel.m = 4.0;
  c.channel.gains = {0.6, 0.4};
  c.split = ReceiverSplit::make(2, 0);
  c.n_trials = 20000;
  return c;
}

void BM_BerSerial(benchmark::State& state) {
  const SimConfig c = ber_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_ber_serial(c));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.n_trials));
}

void BM_BerParallel(benchmark::State& state) {
  const SimConfig c = ber_config();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_ber(c, workers));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.n_trials));
}

void BM_ZdcSerial(benchmark::State& state) {
  const SimConfig c = zdc_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_zdc_serial(c));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.n_trials));
}

void BM_ZdcParallel(benchmark::State& state) {
  const SimConfig c = zdc_config();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_zdc(c, workers));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.n_trials));
}

void BM_Region(benchmark::State& state) {
  const std::vector<double> gains = {0.8, 0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(region(static_cast<int>(state.range(0)), 60, db_to_linear(12.0), 6.0, gains,
                                    1e-4, 1e-6));
  }
}

void worker_counts(benchmark::internal::Benchmark* b) {
  const int max = omp_get_num_procs();
  for (int w = 1; w <= max; w *= 2) {
    b->Arg(w);
  }
  if ((max & (max - 1)) != 0) {
    b->Arg(max);
  }
}

}  // namespace

BENCHMARK(BM_BerSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BerParallel)->Apply(worker_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ZdcSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ZdcParallel)->Apply(worker_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Region)->Arg(4)->Arg(16)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();

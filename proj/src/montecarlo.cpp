#include "chaoswipt/montecarlo.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace chaoswipt {

void SimConfig::validate() const {
  waveform.validate();
  channel.validate();
  split.validate();
  circuit.validate();
  if (n_trials == 0) {
    throw std::invalid_argument("simulation: need at least one trial");
  }
  for (int d : channel.delays) {
    if (static_cast<std::size_t>(d) >= waveform.frame_length()) {
      throw std::invalid_argument("simulation: path delay exceeds the frame length");
    }
  }
  if (target_relative_ci && !(*target_relative_ci > 0.0)) {
    throw std::invalid_argument("simulation: relative CI target must be positive");
  }
}

namespace {

// Per-thread scratch for one trial.
struct Workspace {
  std::vector<double> chips;
  std::vector<double> frame;
  std::vector<double> stats;
  ChannelRealization realization;
  SampleMatrix received;

  explicit Workspace(const SimConfig& c)
      : chips(c.waveform.chaos_per_frame()), frame(c.waveform.frame_length()) {}
};

int draw_bit(Philox4x32& rng) { return (rng() >> 63) != 0 ? 1 : -1; }

// True when the bit of trial `t` is detected in error.
bool ber_trial(const SimConfig& c, double amplitude, std::uint64_t t, Workspace& ws) {
  Philox4x32 rng = trial_stream(c.master_seed, t);
  const int bit = draw_bit(rng);
  fill_chaos(rng, ws.chips);
  write_frame(c.waveform, bit, ws.chips, ws.frame);
  const auto m_it = static_cast<std::size_t>(c.split.n_it);
  sample_channel_into(c.channel, m_it, rng, ws.realization);
  propagate_into(ws.frame, ws.realization, c.channel, amplitude, rng, true, ws.received);
  ws.stats.resize(m_it);
  for (std::size_t n = 0; n < m_it; ++n) {
    ws.stats[n] = it_decision_statistic(ws.received.row(n), c.waveform.reference_length(),
                                        c.waveform.beta);
  }
  return egc_detect(ws.stats) != bit;
}

// Analog correlator output for frame `t`.
double zdc_trial(const SimConfig& c, double amplitude, std::uint64_t t, Workspace& ws) {
  Philox4x32 rng = trial_stream(c.master_seed, t);
  const int bit = c.waveform.carries_data() ? draw_bit(rng) : 1;
  fill_chaos(rng, ws.chips);
  write_frame(c.waveform, bit, ws.chips, ws.frame);
  const auto k_eh = static_cast<std::size_t>(c.split.n_eh);
  if (c.eh_channel_mode == EhChannelMode::CommonAcrossAntennas) {
    sample_channel_into(c.channel, 1, rng, ws.realization);
    const auto paths = ws.realization.paths;
    ws.realization.antennas = k_eh;
    ws.realization.alpha.resize(paths * k_eh);
    for (std::size_t n = 1; n < k_eh; ++n) {
      std::copy_n(ws.realization.alpha.begin(), paths, ws.realization.alpha.begin() + n * paths);
    }
  } else {
    sample_channel_into(c.channel, k_eh, rng, ws.realization);
  }
  propagate_into(ws.frame, ws.realization, c.channel, amplitude, rng, c.eh_noise, ws.received);
  return eh_correlate(ws.received);
}

double amplitude_of(const SimConfig& c) {
  return std::sqrt(c.waveform.transmit_power * c.channel.path_loss());
}

void check_ber_config(const SimConfig& c) {
  c.validate();
  if (c.split.n_it < 1) {
    throw std::invalid_argument("simulate_ber: need at least one IT antenna");
  }
  if (!c.waveform.carries_data()) {
    throw std::invalid_argument("simulate_ber: waveform carries no data");
  }
}

void check_zdc_config(const SimConfig& c) {
  c.validate();
  if (c.split.n_eh < 1) {
    throw std::invalid_argument("simulate_zdc: need at least one EH antenna");
  }
}

Estimate binomial_estimate(std::uint64_t errors, std::uint64_t n) {
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(errors) / nn;
  Estimate e;
  e.value = p;
  e.n_trials = n;
  e.std_error = std::sqrt(p * (1.0 - p) / nn);
  const double denom = 1.0 + z * z / nn;
  const double centre = (p + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  e.ci_lo = std::min(p, std::max(0.0, centre - half));
  e.ci_hi = std::max(p, std::min(1.0, centre + half));
  return e;
}

bool ci_target_met(const Estimate& e, double target) {
  return e.value > 0.0 && 0.5 * (e.ci_hi - e.ci_lo) <= target * e.value;
}

// Runs rounds of n_trials until the CI target (if any) is met.
template <typename CountErrors>
Estimate run_ber_rounds(const SimConfig& c, CountErrors&& count) {
  std::uint64_t errors = 0;
  std::uint64_t done = 0;
  while (true) {
    const std::uint64_t round = std::min(c.n_trials, c.trial_cap - done);
    errors += count(done, done + round);
    done += round;
    Estimate e = binomial_estimate(errors, done);
    if (!c.target_relative_ci || ci_target_met(e, *c.target_relative_ci)) {
      return e;
    }
    if (done >= c.trial_cap) {
      throw CiTargetUnreachable("simulate_ber: relative CI target not reached within " +
                                std::to_string(c.trial_cap) + " bits");
    }
  }
}

std::uint64_t batch_begin(std::uint64_t b, std::uint64_t batches, std::uint64_t n) {
  return b * n / batches;
}

Estimate zdc_estimate(const std::vector<HarvestMoments>& batches, const EhCircuit& circuit) {
  HarvestMoments total;
  for (const auto& b : batches) {
    total.merge(b);
  }
  Estimate e;
  e.value = rectify(total, circuit);
  e.n_trials = total.count;
  const auto nb = batches.size();
  if (nb >= 2) {
    std::vector<double> z(nb);
    for (std::size_t i = 0; i < nb; ++i) {
      z[i] = rectify(batches[i], circuit);
    }
    double mean = 0.0;
    for (double v : z) {
      mean += v;
    }
    mean /= static_cast<double>(nb);
    double ss = 0.0;
    for (double v : z) {
      ss += (v - mean) * (v - mean);
    }
    e.std_error = std::sqrt(ss / static_cast<double>(nb - 1) / static_cast<double>(nb));
    const boost::math::students_t t_law(static_cast<double>(nb - 1));
    const double t = boost::math::quantile(boost::math::complement(t_law, 0.025));
    e.ci_lo = e.value - t * e.std_error;
    e.ci_hi = e.value + t * e.std_error;
  } else {
    e.ci_lo = e.ci_hi = e.value;
  }
  return e;
}

void accumulate_batch(const SimConfig& c, double amplitude, std::uint64_t begin,
                      std::uint64_t end, Workspace& ws, HarvestMoments& acc) {
  for (std::uint64_t t = begin; t < end; ++t) {
    acc.add(zdc_trial(c, amplitude, t, ws));
  }
}

}  // namespace

Estimate simulate_ber_serial(const SimConfig& config) {
  check_ber_config(config);
  const double amplitude = amplitude_of(config);
  Workspace ws(config);
  return run_ber_rounds(config, [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t errors = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      errors += ber_trial(config, amplitude, t, ws) ? 1 : 0;
    }
    return errors;
  });
}

Estimate simulate_ber(const SimConfig& config, int workers) {
  check_ber_config(config);
  const double amplitude = amplitude_of(config);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  return run_ber_rounds(config, [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t errors = 0;
    const auto first = static_cast<std::int64_t>(begin);
    const auto last = static_cast<std::int64_t>(end);
#pragma omp parallel num_threads(threads) reduction(+ : errors)
    {
      Workspace ws(config);
#pragma omp for schedule(static)
      for (std::int64_t t = first; t < last; ++t) {
        errors += ber_trial(config, amplitude, static_cast<std::uint64_t>(t), ws) ? 1 : 0;
      }
    }
    return errors;
  });
}

Estimate simulate_zdc_serial(const SimConfig& config) {
  check_zdc_config(config);
  const double amplitude = amplitude_of(config);
  const std::uint64_t nb = std::min(kZdcBatches, config.n_trials);
  std::vector<HarvestMoments> batches(nb);
  Workspace ws(config);
  for (std::uint64_t b = 0; b < nb; ++b) {
    accumulate_batch(config, amplitude, batch_begin(b, nb, config.n_trials),
                     batch_begin(b + 1, nb, config.n_trials), ws, batches[b]);
  }
  return zdc_estimate(batches, config.circuit);
}

Estimate simulate_zdc(const SimConfig& config, int workers) {
  check_zdc_config(config);
  const double amplitude = amplitude_of(config);
  const std::uint64_t nb = std::min(kZdcBatches, config.n_trials);
  std::vector<HarvestMoments> batches(nb);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto nbi = static_cast<std::int64_t>(nb);
#pragma omp parallel num_threads(threads)
  {
    Workspace ws(config);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < nbi; ++b) {
      const auto ub = static_cast<std::uint64_t>(b);
      accumulate_batch(config, amplitude, batch_begin(ub, nb, config.n_trials),
                       batch_begin(ub + 1, nb, config.n_trials), ws, batches[ub]);
    }
  }
  return zdc_estimate(batches, config.circuit);
}

}  // namespace chaoswipt

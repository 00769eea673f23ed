#include "chaoswipt/channel.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace chaoswipt {

ChannelConfig ChannelConfig::no_fading(double distance, double pathloss_exp, double noise_psd) {
  ChannelConfig c;
  c.fading = FadingKind::NoFading;
  c.gains = {1.0};
  c.distance = distance;
  c.pathloss_exp = pathloss_exp;
  c.noise_psd = noise_psd;
  return c;
}

double ChannelConfig::path_loss() const { return std::pow(distance, -pathloss_exp); }

bool ChannelConfig::has_delays() const noexcept {
  return std::any_of(delays.begin(), delays.end(), [](int d) { return d != 0; });
}

void ChannelConfig::validate() const {
  if (fading == FadingKind::Nakagami) {
    if (!(m >= 1.0)) {
      throw std::invalid_argument("channel: fading parameter m must be >= 1");
    }
    if (gains.empty()) {
      throw std::invalid_argument("channel: at least one path gain is required");
    }
    if (std::any_of(gains.begin(), gains.end(), [](double g) { return !(g >= 0.0); })) {
      throw std::invalid_argument("channel: path gains must be non-negative");
    }
    const double total = std::accumulate(gains.begin(), gains.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("channel: path gains must sum to one (got " +
                                  std::to_string(total) + ")");
    }
  }
  if (!(distance > 0.0) || !(pathloss_exp > 0.0)) {
    throw std::invalid_argument("channel: distance and path-loss exponent must be positive");
  }
  if (!(noise_psd >= 0.0)) {
    throw std::invalid_argument("channel: noise PSD must be non-negative");
  }
  if (!delays.empty()) {
    if (delays.size() != paths()) {
      throw std::invalid_argument("channel: need one delay per path");
    }
    if (delays.front() != 0) {
      throw std::invalid_argument("channel: the first path delay must be zero");
    }
    if (!std::is_sorted(delays.begin(), delays.end())) {
      throw std::invalid_argument("channel: delays must be nondecreasing");
    }
  }
}

double ChannelRealization::coefficient_sum(std::size_t n) const noexcept {
  const auto a = antenna(n);
  return std::accumulate(a.begin(), a.end(), 0.0);
}

void sample_channel_into(const ChannelConfig& config, std::size_t n_antennas, Philox4x32& rng,
                         ChannelRealization& out) {
  const std::size_t paths = config.paths();
  out.paths = paths;
  out.antennas = n_antennas;
  out.alpha.resize(paths * n_antennas);
  if (config.fading == FadingKind::NoFading) {
    std::fill(out.alpha.begin(), out.alpha.end(), 1.0);
    return;
  }
  for (std::size_t n = 0; n < n_antennas; ++n) {
    for (std::size_t i = 0; i < paths; ++i) {
      const double omega = config.gains[i];
      double a = 0.0;
      if (omega > 0.0) {
        boost::random::gamma_distribution<double> power(config.m, omega / config.m);
        a = std::sqrt(power(rng));
      }
      out.alpha[n * paths + i] = a;
    }
  }
}

ChannelRealization sample_channel(const ChannelConfig& config, std::size_t n_antennas,
                                  Philox4x32& rng) {
  config.validate();
  if (n_antennas == 0) {
    throw std::invalid_argument("sample_channel: need at least one antenna");
  }
  ChannelRealization out;
  sample_channel_into(config, n_antennas, rng, out);
  return out;
}

double nakagami_moment(double order, double m, double omega) {
  if (!(m >= 1.0) || !(omega >= 0.0) || !(order >= 0.0)) {
    throw std::invalid_argument("nakagami_moment: need m >= 1, omega >= 0, order >= 0");
  }
  if (order == 0.0) {
    return 1.0;
  }
  if (omega == 0.0) {
    return 0.0;
  }
  return boost::math::tgamma_ratio(m + 0.5 * order, m) * std::pow(omega / m, 0.5 * order);
}

void propagate_into(std::span<const double> frame, const ChannelRealization& realization,
                    const ChannelConfig& config, double amplitude, Philox4x32& rng,
                    bool noise_enabled, SampleMatrix& out) {
  const std::size_t len = frame.size();
  out.rows = realization.antennas;
  out.cols = len;
  out.data.resize(out.rows * len);
  const bool delayed = config.has_delays();
  for (std::size_t n = 0; n < realization.antennas; ++n) {
    auto row = out.row(n);
    if (!delayed) {
      const double g = amplitude * realization.coefficient_sum(n);
      for (std::size_t k = 0; k < len; ++k) {
        row[k] = g * frame[k];
      }
    } else {
      std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t i = 0; i < realization.paths; ++i) {
        const double g = amplitude * realization(i, n);
        const auto tau = static_cast<std::size_t>(config.delays[i]);
        for (std::size_t k = tau; k < len; ++k) {
          row[k] += g * frame[k - tau];
        }
      }
    }
  }
  if (noise_enabled && config.noise_psd > 0.0) {
    boost::random::normal_distribution<double> noise(0.0, std::sqrt(0.5 * config.noise_psd));
    for (auto& v : out.data) {
      v += noise(rng);
    }
  }
}

SampleMatrix propagate(const SampleFrame& frame, const ChannelRealization& realization,
                       const ChannelConfig& config, double transmit_power, Philox4x32& rng,
                       bool noise_enabled) {
  config.validate();
  if (realization.paths != config.paths()) {
    throw std::invalid_argument("propagate: realization path count does not match the channel");
  }
  if (realization.alpha.size() != realization.paths * realization.antennas) {
    throw std::invalid_argument("propagate: malformed channel realization");
  }
  for (int d : config.delays) {
    if (static_cast<std::size_t>(d) >= frame.samples.size()) {
      throw std::invalid_argument("propagate: path delay " + std::to_string(d) +
                                  " exceeds the frame length");
    }
  }
  if (!(transmit_power >= 0.0)) {
    throw std::invalid_argument("propagate: transmit power must be non-negative");
  }
  SampleMatrix out;
  propagate_into(frame.samples, realization, config,
                 std::sqrt(transmit_power * config.path_loss()), rng, noise_enabled, out);
  return out;
}

}  // namespace chaoswipt

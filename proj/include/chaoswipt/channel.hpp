#pragma once

// Frequency-selective Nakagami-m channel with path loss and real AWGN.

#include <cstddef>
#include <span>
#include <vector>

#include "chaoswipt/rng.hpp"
#include "chaoswipt/waveform.hpp"

namespace chaoswipt {

enum class FadingKind {
  Nakagami,
  NoFading,  ///< one path, alpha = 1 on every antenna
};

struct ChannelConfig {
  FadingKind fading = FadingKind::Nakagami;
  double m = 1.0;                    ///< fading severity, >= 1
  std::vector<double> gains{1.0};    ///< per-path mean powers Omega_i, summing to one
  double distance = 20.0;            ///< metres
  double pathloss_exp = 4.0;
  double noise_psd = 0.0;            ///< N0; per-chip noise variance is N0 / 2
  std::vector<int> delays;           ///< chips; empty means all zero

  static ChannelConfig no_fading(double distance = 20.0, double pathloss_exp = 4.0,
                                 double noise_psd = 0.0);

  std::size_t paths() const noexcept { return fading == FadingKind::NoFading ? 1 : gains.size(); }
  double path_loss() const;
  bool has_delays() const noexcept;
  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

/// alpha(i, n) for path i and antenna n, stored antenna-major.
struct ChannelRealization {
  std::size_t paths = 0;
  std::size_t antennas = 0;
  std::vector<double> alpha;

  double operator()(std::size_t path, std::size_t antenna) const noexcept {
    return alpha[antenna * paths + path];
  }
  std::span<const double> antenna(std::size_t n) const noexcept {
    return std::span<const double>(alpha).subspan(n * paths, paths);
  }
  /// Sum over paths of alpha(i, n): the flat-channel gain on antenna n.
  double coefficient_sum(std::size_t n) const noexcept;
};

/// Rows are antennas, columns chips.
struct SampleMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  SampleMatrix() = default;
  SampleMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  void resize(std::size_t r, std::size_t c) {
    rows = r;
    cols = c;
    data.assign(r * c, 0.0);
  }
  std::span<double> row(std::size_t n) noexcept { return std::span<double>(data).subspan(n * cols, cols); }
  std::span<const double> row(std::size_t n) const noexcept {
    return std::span<const double>(data).subspan(n * cols, cols);
  }
};

/// Draws alpha(i, n) ~ Nakagami(m, Omega_i) independently as sqrt of a
/// Gamma(m, Omega_i / m) variate.
ChannelRealization sample_channel(const ChannelConfig& config, std::size_t n_antennas,
                                  Philox4x32& rng);

/// In-place variant for the simulator; `out` keeps its capacity. No validation.
void sample_channel_into(const ChannelConfig& config, std::size_t n_antennas, Philox4x32& rng,
                         ChannelRealization& out);

/// E{alpha^n} = Gamma(m + n/2) / Gamma(m) (Omega / m)^(n/2). `order` may be
/// any non-negative real; omega = 0 gives 0 for positive orders.
double nakagami_moment(double order, double m, double omega);

/// Received samples on every antenna of `realization`. With zero delays each
/// antenna sees sqrt(P_t r^-a) (sum_i alpha_i) s_k + w; otherwise each path is
/// a chip-shifted copy with a zero-padded head. Throws std::invalid_argument
/// when a delay is not shorter than the frame.
SampleMatrix propagate(const SampleFrame& frame, const ChannelRealization& realization,
                       const ChannelConfig& config, double transmit_power, Philox4x32& rng,
                       bool noise_enabled);

/// Simulator variant writing into a preallocated matrix. No validation.
void propagate_into(std::span<const double> frame, const ChannelRealization& realization,
                    const ChannelConfig& config, double amplitude, Philox4x32& rng,
                    bool noise_enabled, SampleMatrix& out);

}  // namespace chaoswipt

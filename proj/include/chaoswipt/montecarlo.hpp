#pragma once

// End-to-end Monte Carlo: transmit, fade, receive, detect or harvest.
//
// Each trial (one bit or one frame) draws everything it needs from
// trial_stream(master_seed, trial_index). The OpenMP kernels and the serial
// reference share the same fixed batch partition, so a given config produces
// bit-identical estimates for any worker count.

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "chaoswipt/channel.hpp"
#include "chaoswipt/receiver.hpp"
#include "chaoswipt/waveform.hpp"

namespace chaoswipt {

enum class EhChannelMode {
  CommonAcrossAntennas,  ///< one realization shared by all K EH antennas
  Independent,           ///< each EH antenna fades independently
};

struct SimConfig {
  WaveformSpec waveform;
  ChannelConfig channel;
  ReceiverSplit split;
  EhCircuit circuit;
  std::uint64_t n_trials = 100000;  ///< bits for BER runs, frames for z_DC runs
  std::uint64_t master_seed = 1;
  EhChannelMode eh_channel_mode = EhChannelMode::CommonAcrossAntennas;
  bool eh_noise = false;
  /// BER runs only: keep adding rounds of n_trials bits until the 95% CI
  /// half-width over the estimate drops below this.
  std::optional<double> target_relative_ci;
  std::uint64_t trial_cap = 1'000'000'000;

  void validate() const;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_trials = 0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

/// Raised when a BER run hits trial_cap before reaching target_relative_ci.
class CiTargetUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of batches used for z_DC batch-means errors.
inline constexpr std::uint64_t kZdcBatches = 32;

/// Bit error rate with a binomial standard error and a Wilson 95% interval.
/// `workers` = 0 uses the OpenMP default.
Estimate simulate_ber(const SimConfig& config, int workers = 0);
Estimate simulate_ber_serial(const SimConfig& config);

/// Harvested DC from the transmit-correlate-rectify chain, with a
/// batch-means standard error and a Student-t 95% interval.
Estimate simulate_zdc(const SimConfig& config, int workers = 0);
Estimate simulate_zdc_serial(const SimConfig& config);

}  // namespace chaoswipt

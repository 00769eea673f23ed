#pragma once

// Transmit frames for the DCSK family and the two pure power-transfer
// waveforms.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "chaoswipt/chaos.hpp"

namespace chaoswipt {

enum class WaveformKind {
  Dcsk,          ///< reference of beta chips, then one data copy
  SrDcsk,        ///< reference of phi chips, then zeta = beta/phi data copies
  WptOptSrDcsk,  ///< SR-DCSK with phi = 1: one chip plus beta data copies
  Unmodulated,   ///< beta + 1 fresh chaotic chips, no data
  Repeated,      ///< one chaotic chip repeated beta + 1 times, no data
};

std::string_view to_string(WaveformKind kind) noexcept;
/// Accepts the names produced by to_string; throws std::invalid_argument otherwise.
WaveformKind parse_waveform_kind(std::string_view name);

struct WaveformSpec {
  WaveformKind kind = WaveformKind::SrDcsk;
  int beta = 1;
  int phi = 1;  ///< only meaningful for SrDcsk
  double transmit_power = 1.0;  ///< watts
  double chip_duration = 1.0;   ///< seconds

  static WaveformSpec sr_dcsk(int beta, int phi, double transmit_power = 1.0);
  static WaveformSpec dcsk(int beta, double transmit_power = 1.0);
  static WaveformSpec wpt_optimal(int beta, double transmit_power = 1.0);
  static WaveformSpec unmodulated(int beta, double transmit_power = 1.0);
  static WaveformSpec repeated(int beta, double transmit_power = 1.0);

  /// Throws std::invalid_argument on a malformed spec.
  void validate() const;

  bool carries_data() const noexcept;
  /// Reference length actually used by the frame (beta for DCSK, 1 for WPT-optimal).
  int reference_length() const noexcept;
  /// Number of data replicas of the reference.
  int zeta() const noexcept;
  std::size_t frame_length() const noexcept;
  /// Fresh chaotic samples consumed per frame.
  std::size_t chaos_per_frame() const noexcept;
};

struct SampleFrame {
  std::vector<double> samples;
  std::optional<int> data_bit;
  std::int64_t frame_index = 0;
};

/// Writes one frame's samples into `out` from the frame's own chaotic chips.
/// `chips.size()` must equal spec.chaos_per_frame() and `out.size()` the frame
/// length. No validation; the hot path of the simulator.
void write_frame(const WaveformSpec& spec, int data_bit, std::span<const double> chips,
                 std::span<double> out) noexcept;

/// Frame `frame_index` drawn from one long basis sequence: the frame uses
/// basis samples [frame_index * chaos_per_frame, (frame_index + 1) * chaos_per_frame).
SampleFrame build_frame(const WaveformSpec& spec, std::optional<int> data_bit,
                        const ChaoticSequence& basis, std::int64_t frame_index);

/// Transmitted bit energy P_t T_c (phi + beta) E{x^2}; DCSK uses 2 beta.
/// Throws std::invalid_argument for waveforms that carry no data.
double bit_energy(const WaveformSpec& spec);

}  // namespace chaoswipt

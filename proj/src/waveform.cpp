#include "chaoswipt/waveform.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace chaoswipt {

std::string_view to_string(WaveformKind kind) noexcept {
  switch (kind) {
    case WaveformKind::Dcsk: return "dcsk";
    case WaveformKind::SrDcsk: return "srdcsk";
    case WaveformKind::WptOptSrDcsk: return "wpt-opt";
    case WaveformKind::Unmodulated: return "unmodulated";
    case WaveformKind::Repeated: return "repeated";
  }
  return "?";
}

WaveformKind parse_waveform_kind(std::string_view name) {
  for (auto kind : {WaveformKind::Dcsk, WaveformKind::SrDcsk, WaveformKind::WptOptSrDcsk,
                    WaveformKind::Unmodulated, WaveformKind::Repeated}) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  throw std::invalid_argument("unknown waveform '" + std::string(name) +
                              "' (expected dcsk, srdcsk, wpt-opt, unmodulated or repeated)");
}

WaveformSpec WaveformSpec::sr_dcsk(int beta, int phi, double transmit_power) {
  return {WaveformKind::SrDcsk, beta, phi, transmit_power, 1.0};
}
WaveformSpec WaveformSpec::dcsk(int beta, double transmit_power) {
  return {WaveformKind::Dcsk, beta, beta, transmit_power, 1.0};
}
WaveformSpec WaveformSpec::wpt_optimal(int beta, double transmit_power) {
  return {WaveformKind::WptOptSrDcsk, beta, 1, transmit_power, 1.0};
}
WaveformSpec WaveformSpec::unmodulated(int beta, double transmit_power) {
  return {WaveformKind::Unmodulated, beta, 1, transmit_power, 1.0};
}
WaveformSpec WaveformSpec::repeated(int beta, double transmit_power) {
  return {WaveformKind::Repeated, beta, 1, transmit_power, 1.0};
}

void WaveformSpec::validate() const {
  if (beta < 1) {
    throw std::invalid_argument("waveform: beta must be a positive integer");
  }
  if (!(transmit_power >= 0.0)) {
    throw std::invalid_argument("waveform: transmit power must be non-negative");
  }
  if (!(chip_duration > 0.0)) {
    throw std::invalid_argument("waveform: chip duration must be positive");
  }
  if (kind == WaveformKind::SrDcsk) {
    if (phi < 1 || phi > beta) {
      throw std::invalid_argument("waveform: SR-DCSK needs 1 <= phi <= beta");
    }
    if (beta % phi != 0) {
      throw std::invalid_argument("waveform: SR-DCSK needs beta divisible by phi (beta=" +
                                  std::to_string(beta) + ", phi=" + std::to_string(phi) + ")");
    }
  }
  if (kind == WaveformKind::WptOptSrDcsk && phi != 1) {
    throw std::invalid_argument("waveform: the WPT-optimal frame has phi = 1");
  }
}

bool WaveformSpec::carries_data() const noexcept {
  return kind == WaveformKind::Dcsk || kind == WaveformKind::SrDcsk ||
         kind == WaveformKind::WptOptSrDcsk;
}

int WaveformSpec::reference_length() const noexcept {
  switch (kind) {
    case WaveformKind::Dcsk: return beta;
    case WaveformKind::SrDcsk: return phi;
    case WaveformKind::Unmodulated: return beta + 1;
    case WaveformKind::WptOptSrDcsk:
    case WaveformKind::Repeated: return 1;
  }
  return 1;
}

int WaveformSpec::zeta() const noexcept {
  switch (kind) {
    case WaveformKind::Dcsk: return 1;
    case WaveformKind::SrDcsk: return beta / phi;
    case WaveformKind::Unmodulated: return 0;
    case WaveformKind::WptOptSrDcsk:
    case WaveformKind::Repeated: return beta;
  }
  return 0;
}

std::size_t WaveformSpec::frame_length() const noexcept {
  switch (kind) {
    case WaveformKind::Dcsk: return 2 * static_cast<std::size_t>(beta);
    case WaveformKind::SrDcsk: return static_cast<std::size_t>(phi + beta);
    default: return static_cast<std::size_t>(beta) + 1;
  }
}

std::size_t WaveformSpec::chaos_per_frame() const noexcept {
  return static_cast<std::size_t>(reference_length());
}

void write_frame(const WaveformSpec& spec, int data_bit, std::span<const double> chips,
                 std::span<double> out) noexcept {
  if (spec.kind == WaveformKind::Unmodulated) {
    std::copy(chips.begin(), chips.end(), out.begin());
    return;
  }
  const auto ref = chips.size();
  std::copy(chips.begin(), chips.end(), out.begin());
  const double sign = spec.kind == WaveformKind::Repeated ? 1.0 : static_cast<double>(data_bit);
  for (std::size_t k = ref; k < out.size(); ++k) {
    out[k] = sign * chips[(k - ref) % ref];
  }
}

SampleFrame build_frame(const WaveformSpec& spec, std::optional<int> data_bit,
                        const ChaoticSequence& basis, std::int64_t frame_index) {
  spec.validate();
  if (spec.carries_data() != data_bit.has_value()) {
    throw std::invalid_argument(spec.carries_data()
                                    ? "build_frame: this waveform needs a data bit"
                                    : "build_frame: this waveform carries no data bit");
  }
  if (data_bit && *data_bit != 1 && *data_bit != -1) {
    throw std::invalid_argument("build_frame: data bit must be +1 or -1");
  }
  if (frame_index < 0) {
    throw std::invalid_argument("build_frame: negative frame index");
  }
  const std::size_t need = spec.chaos_per_frame();
  const std::size_t offset = static_cast<std::size_t>(frame_index) * need;
  if (basis.samples.size() < offset + need) {
    throw std::invalid_argument("build_frame: basis sequence too short for frame " +
                                std::to_string(frame_index));
  }
  SampleFrame frame;
  frame.samples.resize(spec.frame_length());
  frame.data_bit = data_bit;
  frame.frame_index = frame_index;
  write_frame(spec, data_bit.value_or(1),
              std::span<const double>(basis.samples).subspan(offset, need), frame.samples);
  return frame;
}

double bit_energy(const WaveformSpec& spec) {
  spec.validate();
  if (!spec.carries_data()) {
    throw std::invalid_argument("bit_energy: waveform carries no data");
  }
  return spec.transmit_power * spec.chip_duration * static_cast<double>(spec.frame_length()) *
         chaotic_moment(2);
}

}  // namespace chaoswipt

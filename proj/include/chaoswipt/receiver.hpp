#pragma once

// Antenna-switching receiver: noncoherent IT branch (partial correlations and
// equal gain combining) and the EH branch (PISO serialization, analog
// correlator, polynomial rectifier).

#include <cstdint>
#include <span>
#include <vector>

#include "chaoswipt/channel.hpp"

namespace chaoswipt {

struct ReceiverSplit {
  int n_total = 1;
  int n_it = 1;
  int n_eh = 0;

  static ReceiverSplit make(int n_total, int n_it) { return {n_total, n_it, n_total - n_it}; }
  /// Throws std::invalid_argument unless n_it + n_eh = n_total with all counts valid.
  void validate() const;
};

/// Rectifier constants. k4 = 0 reduces the model to the linear harvester.
struct EhCircuit {
  double k2 = 0.0034;
  double k4 = 0.3829;
  double r_ant = 50.0;

  void validate() const;
};

/// Sum over the zeta data blocks of each block's correlation with the shared
/// reference head. `received` must hold phi + beta samples.
double it_decision_statistic(std::span<const double> received, int phi, int beta);

/// Equal gain combining: sign of the summed statistics, with an exact zero
/// resolving to +1. Throws std::invalid_argument on an empty input.
int egc_detect(std::span<const double> stats);

/// Analog correlator output: the PISO stream of all rows summed.
double eh_correlate(const SampleMatrix& received) noexcept;
/// Same for separately stored antenna frames; ragged input throws.
double eh_correlate(std::span<const std::vector<double>> received);

/// Running sums of s^2 and s^4 over correlator outputs. Merging is exact
/// summation, so partial accumulators from workers combine in any grouping.
struct HarvestMoments {
  double sum2 = 0.0;
  double sum4 = 0.0;
  std::uint64_t count = 0;

  void add(double s) noexcept {
    const double s2 = s * s;
    sum2 += s2;
    sum4 += s2 * s2;
    ++count;
  }
  void merge(const HarvestMoments& other) noexcept {
    sum2 += other.sum2;
    sum4 += other.sum4;
    count += other.count;
  }
  double mean2() const noexcept { return count ? sum2 / static_cast<double>(count) : 0.0; }
  double mean4() const noexcept { return count ? sum4 / static_cast<double>(count) : 0.0; }
};

/// z_DC = k2 R E{s^2} + k4 R^2 E{s^4} over an ensemble of correlator outputs.
double rectify(std::span<const double> correlator_outputs, const EhCircuit& circuit);
double rectify(const HarvestMoments& moments, const EhCircuit& circuit);

}  // namespace chaoswipt

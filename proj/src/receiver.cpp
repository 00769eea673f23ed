#include "chaoswipt/receiver.hpp"

#include <numeric>
#include <stdexcept>

namespace chaoswipt {

void ReceiverSplit::validate() const {
  if (n_total < 1 || n_it < 0 || n_eh < 0 || n_it + n_eh != n_total) {
    throw std::invalid_argument("receiver split: need M + K = N with N >= 1 and M, K >= 0");
  }
}

void EhCircuit::validate() const {
  if (!(k2 > 0.0) || !(k4 >= 0.0) || !(r_ant > 0.0)) {
    throw std::invalid_argument("EH circuit: need k2 > 0, k4 >= 0 and R_ant > 0");
  }
}

double it_decision_statistic(std::span<const double> received, int phi, int beta) {
  if (phi < 1 || beta < phi || beta % phi != 0) {
    throw std::invalid_argument("it_decision_statistic: need beta to be a multiple of phi");
  }
  const auto ref = static_cast<std::size_t>(phi);
  if (received.size() != ref + static_cast<std::size_t>(beta)) {
    throw std::invalid_argument("it_decision_statistic: frame length must be phi + beta");
  }
  const auto head = received.first(ref);
  double delta = 0.0;
  for (std::size_t start = ref; start < received.size(); start += ref) {
    delta += std::inner_product(head.begin(), head.end(), received.begin() + start, 0.0);
  }
  return delta;
}

int egc_detect(std::span<const double> stats) {
  if (stats.empty()) {
    throw std::invalid_argument("egc_detect: no decision statistics");
  }
  return std::accumulate(stats.begin(), stats.end(), 0.0) >= 0.0 ? 1 : -1;
}

double eh_correlate(const SampleMatrix& received) noexcept {
  return std::accumulate(received.data.begin(), received.data.end(), 0.0);
}

double eh_correlate(std::span<const std::vector<double>> received) {
  if (received.empty()) {
    throw std::invalid_argument("eh_correlate: need at least one EH antenna");
  }
  const auto len = received.front().size();
  double s = 0.0;
  for (const auto& frame : received) {
    if (frame.size() != len) {
      throw std::invalid_argument("eh_correlate: antenna frames differ in length");
    }
    s = std::accumulate(frame.begin(), frame.end(), s);
  }
  return s;
}

double rectify(const HarvestMoments& moments, const EhCircuit& circuit) {
  if (moments.count == 0) {
    throw std::invalid_argument("rectify: no correlator outputs");
  }
  return circuit.k2 * circuit.r_ant * moments.mean2() +
         circuit.k4 * circuit.r_ant * circuit.r_ant * moments.mean4();
}

double rectify(std::span<const double> correlator_outputs, const EhCircuit& circuit) {
  HarvestMoments acc;
  for (double s : correlator_outputs) {
    acc.add(s);
  }
  return rectify(acc, circuit);
}

}  // namespace chaoswipt

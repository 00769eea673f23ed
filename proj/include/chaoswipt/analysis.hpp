#pragma once

// Closed-form predictions: BER over AWGN and Nakagami-m fading, the optimal
// reference length, harvested DC for every waveform family, and the
// success-rate / harvested-DC region.
//
// All SNRs are linear here; dB conversion happens at the CLI boundary.

#include <span>
#include <stdexcept>
#include <vector>

#include "chaoswipt/receiver.hpp"

namespace chaoswipt {

/// Raised when adaptive quadrature misses its error target.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LinkBudget {
  double gamma0 = 1.0;  ///< linear SNR per bit, r^-a eps_b / N0
  double nu1 = 0.0;     ///< r^-a k2 R_ant P_t
  double nu2 = 0.0;     ///< r^-2a k4 R_ant^2 P_t^2

  static LinkBudget from_physical(double gamma0, double transmit_power, double path_loss,
                                  const EhCircuit& circuit);
};

/// N0 that realizes `gamma0` for a given bit energy and path loss.
double noise_psd_for(double gamma0, double bit_energy, double path_loss);

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;
double dbm_to_watts(double dbm) noexcept;

/// Second and fourth raw moments of the per-antenna path-coefficient sum.
struct ChannelFactors {
  double upsilon1 = 1.0;
  double upsilon2 = 1.0;
};

/// Throws std::invalid_argument when the gains do not sum to one.
ChannelFactors channel_factors(double m, std::span<const double> gains);

/// Sorted positive divisors of n.
std::vector<int> divisors(int n);

/// Lambda(phi) = (phi+beta)^2 / (beta gamma0) (1/(2 gamma0) + 1/phi), for real phi.
double reference_lambda(double phi, double beta, double gamma0) noexcept;

/// 0.5 erfc(sqrt(M / Lambda(phi))) with no admissibility checks; real M allowed.
double ber_awgn_continuous(double m_it, double phi, double beta, double gamma0) noexcept;

/// AWGN BER of SR-DCSK with EGC over M antennas. Throws std::invalid_argument
/// unless 1 <= phi <= beta, phi | beta, gamma0 > 0 and M >= 1.
double ber_awgn(int m_it, int phi, int beta, double gamma0);

struct PhiOptimum {
  double real = 0.0;   ///< unconstrained stationary point of Lambda
  int admissible = 1;  ///< BER-minimizing divisor of beta (one of the two bracketing real)
  int nearest = 1;     ///< divisor of beta closest to real in absolute distance
};

/// Optimal reference length. Ties between divisors go to the smaller one.
PhiOptimum phi_opt(int beta, double gamma0);

/// BER conditioned on the aggregate channel power kappa.
double conditional_ber(double kappa, int m_it, int phi, int beta, double gamma0) noexcept;

/// BER averaged over kappa ~ Gamma(M m L, 1/(m L)) by adaptive Gauss-Kronrod
/// quadrature to 1e-8 relative error. Throws QuadratureError when that target
/// is missed and std::invalid_argument on a domain violation.
double ber_fading(int m_it, int phi, int beta, double gamma0, double m, int paths);

struct DecisionMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Conditional mean and variance of the combined decision statistic given kappa.
DecisionMoments decision_moments(int data_bit, double kappa, int m_it, int phi, int beta,
                                 double bit_energy, double path_loss, double noise_psd);

/// Harvested DC of SR-DCSK with K EH antennas.
double zdc_srdcsk(int k_eh, int phi, int beta, double nu1, double nu2, ChannelFactors factors);
/// Unmodulated chaotic frame of beta + 1 chips on all N antennas.
double zdc_unmodulated(int n, int beta, double nu1, double nu2, ChannelFactors factors);
/// Repeated-chip frame of beta + 1 chips on all N antennas.
double zdc_repeated(int n, int beta, double nu1, double nu2, ChannelFactors factors);

struct PerformanceGaps {
  double xi1 = 0.0;  ///< repeated minus unmodulated
  double xi2 = 0.0;  ///< repeated minus WPT-optimal SR-DCSK
};

PerformanceGaps gaps(int n, int beta, double nu1, double nu2, ChannelFactors factors);

/// Real-valued antenna count reaching `sr_target` with phi at its real
/// optimum. Throws std::invalid_argument unless 0.5 < sr_target < 1.
double required_antennas(double sr_target, int beta, double gamma0);

struct RegionPoint {
  double sr = 0.0;
  double zdc = 0.0;
  int phi = 1;
  int m_it = 1;
  int k_eh = 0;
};

struct Region {
  std::vector<RegionPoint> points;  ///< ordered by phi, then M
  std::vector<RegionPoint> pareto;  ///< non-dominated subset, same order
};

/// Enumerates phi over the divisors of beta up to phi_opt(beta).admissible and
/// every split M + K = N with M, K >= 1. Throws std::invalid_argument when the
/// sweep is empty.
Region region(int n, int beta, double gamma0, double m, std::span<const double> gains,
              double nu1, double nu2);

}  // namespace chaoswipt

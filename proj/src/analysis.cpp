#include "chaoswipt/analysis.hpp"

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chaoswipt/channel.hpp"

namespace chaoswipt {

namespace {

void require(bool ok, const char* what) {
  if (!ok) {
    throw std::invalid_argument(what);
  }
}

void check_frame(int phi, int beta) {
  require(beta >= 1, "beta must be a positive integer");
  require(phi >= 1 && phi <= beta, "phi must lie in [1, beta]");
  require(beta % phi == 0, "phi must divide beta");
}

// All weak compositions of `total` into `parts` non-negative integers.
void compositions(int total, std::size_t parts, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (current.size() + 1 == parts) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int i = total; i >= 0; --i) {
    current.push_back(i);
    compositions(total - i, parts, current, out);
    current.pop_back();
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) {
    f *= i;
  }
  return f;
}

}  // namespace

LinkBudget LinkBudget::from_physical(double gamma0, double transmit_power, double path_loss,
                                     const EhCircuit& circuit) {
  LinkBudget lb;
  lb.gamma0 = gamma0;
  lb.nu1 = path_loss * circuit.k2 * circuit.r_ant * transmit_power;
  lb.nu2 = path_loss * path_loss * circuit.k4 * circuit.r_ant * circuit.r_ant * transmit_power *
           transmit_power;
  return lb;
}

double noise_psd_for(double gamma0, double bit_energy, double path_loss) {
  require(gamma0 > 0.0, "gamma0 must be positive");
  return path_loss * bit_energy / gamma0;
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) noexcept { return std::pow(10.0, (dbm - 30.0) / 10.0); }

ChannelFactors channel_factors(double m, std::span<const double> gains) {
  require(m >= 1.0, "channel_factors: m must be >= 1");
  require(!gains.empty(), "channel_factors: need at least one path");
  const double total = std::accumulate(gains.begin(), gains.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("channel_factors: path gains must sum to one (got " +
                                std::to_string(total) + ")");
  }

  // E{(sum_i a_i)^2}: the diagonal contributes sum Omega_i = 1, each unordered
  // pair twice the product of first moments.
  ChannelFactors f;
  double cross = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    for (std::size_t j = i + 1; j < gains.size(); ++j) {
      cross += nakagami_moment(1.0, m, gains[i]) * nakagami_moment(1.0, m, gains[j]);
    }
  }
  f.upsilon1 = 1.0 + 2.0 * cross;

  // E{(sum_i a_i)^4} by the multinomial expansion over weak compositions of 4.
  std::vector<std::vector<int>> terms;
  std::vector<int> scratch;
  compositions(4, gains.size(), scratch, terms);
  double fourth = 0.0;
  for (const auto& powers : terms) {
    double coeff = factorial(4);
    double prod = 1.0;
    for (std::size_t j = 0; j < powers.size(); ++j) {
      coeff /= factorial(powers[j]);
      prod *= nakagami_moment(powers[j], m, gains[j]);
    }
    fourth += coeff * prod;
  }
  f.upsilon2 = fourth;
  return f;
}

std::vector<int> divisors(int n) {
  std::vector<int> out;
  for (int d = 1; d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
    }
  }
  return out;
}

double reference_lambda(double phi, double beta, double gamma0) noexcept {
  return (phi + beta) * (phi + beta) / (beta * gamma0) * (0.5 / gamma0 + 1.0 / phi);
}

double ber_awgn_continuous(double m_it, double phi, double beta, double gamma0) noexcept {
  return 0.5 * std::erfc(std::sqrt(m_it / reference_lambda(phi, beta, gamma0)));
}

double ber_awgn(int m_it, int phi, int beta, double gamma0) {
  check_frame(phi, beta);
  require(m_it >= 1, "M must be at least 1");
  require(gamma0 > 0.0, "gamma0 must be positive");
  return ber_awgn_continuous(m_it, phi, beta, gamma0);
}

PhiOptimum phi_opt(int beta, double gamma0) {
  require(beta >= 1, "phi_opt: beta must be a positive integer");
  require(gamma0 > 0.0, "phi_opt: gamma0 must be positive");
  PhiOptimum opt;
  opt.real = 0.5 * gamma0 * (std::sqrt(1.0 + 4.0 * beta / gamma0) - 1.0);

  const auto divs = divisors(beta);
  opt.nearest = divs.front();
  for (int d : divs) {
    if (std::abs(d - opt.real) < std::abs(opt.nearest - opt.real)) {
      opt.nearest = d;
    }
  }

  // Lambda is unimodal in phi, so the best admissible value brackets the
  // real optimum.
  int below = divs.front();
  int above = divs.back();
  for (int d : divs) {
    if (d <= opt.real) {
      below = d;
    }
  }
  for (auto it = divs.rbegin(); it != divs.rend(); ++it) {
    if (*it >= opt.real) {
      above = *it;
    }
  }
  const double lam_below = reference_lambda(below, beta, gamma0);
  const double lam_above = reference_lambda(above, beta, gamma0);
  opt.admissible = lam_above < lam_below ? above : below;
  return opt;
}

double conditional_ber(double kappa, int m_it, int phi, int beta, double gamma0) noexcept {
  if (!(kappa > 0.0)) {
    return 0.5;
  }
  const double sum = phi + beta;
  const double zeta = static_cast<double>(beta) / phi;
  const double inv_snr = m_it * sum * sum / (2.0 * beta * gamma0 * gamma0 * kappa * kappa) +
                         (zeta + 1.0) / zeta * sum / (phi * gamma0 * kappa);
  return 0.5 * std::erfc(1.0 / std::sqrt(inv_snr));
}

double ber_fading(int m_it, int phi, int beta, double gamma0, double m, int paths) {
  check_frame(phi, beta);
  require(m_it >= 1, "M must be at least 1");
  require(gamma0 > 0.0, "gamma0 must be positive");
  require(m >= 1.0, "m must be >= 1");
  require(paths >= 1, "L must be at least 1");

  const double shape = m_it * m * paths;
  const boost::math::gamma_distribution<double> kappa_law(shape, 1.0 / (m * paths));
  const double lo = boost::math::quantile(kappa_law, 1e-12);
  const double hi = boost::math::quantile(kappa_law, 1.0 - 1e-12);
  auto integrand = [&](double kappa) {
    return conditional_ber(kappa, m_it, phi, beta, gamma0) * boost::math::pdf(kappa_law, kappa);
  };

  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr double kTol = 1e-10;
  double err_body = 0.0;
  double err_head = 0.0;
  const double body = Rule::integrate(integrand, lo, hi, 20, kTol, &err_body);
  // The head below the 1e-12 quantile holds at most 5e-13 of mass; one
  // non-adaptive pass resolves it, and refining would only chase roundoff.
  const double head = Rule::integrate(integrand, 0.0, lo, 0, kTol, &err_head);
  const double total = body + head;
  const double err = err_body + err_head;
  if (!(total > 0.0) || !std::isfinite(total) || err > 1e-8 * total) {
    throw QuadratureError("ber_fading: quadrature missed 1e-8 relative error (estimate " +
                          std::to_string(err / total) + ")");
  }
  return total;
}

DecisionMoments decision_moments(int data_bit, double kappa, int m_it, int phi, int beta,
                                 double bit_energy, double path_loss, double noise_psd) {
  check_frame(phi, beta);
  require(data_bit == 1 || data_bit == -1, "data bit must be +1 or -1");
  require(kappa >= 0.0, "kappa must be non-negative");
  require(m_it >= 1, "M must be at least 1");
  const double sum = phi + beta;
  const double zeta = static_cast<double>(beta) / phi;
  DecisionMoments dm;
  dm.mean = beta * path_loss * data_bit * bit_energy * kappa / sum;
  dm.variance = 0.5 * beta * noise_psd *
                (0.5 * m_it * noise_psd + path_loss * bit_energy * (zeta + 1.0) * kappa / sum);
  return dm;
}

double zdc_srdcsk(int k_eh, int phi, int beta, double nu1, double nu2, ChannelFactors factors) {
  check_frame(phi, beta);
  require(k_eh >= 0, "K must be non-negative");
  const double k = k_eh;
  const double p = phi;
  const double z = static_cast<double>(beta) / phi;
  const double z2 = z * z;
  return 0.5 * nu1 * factors.upsilon1 * k * k * p * (1.0 + z2) +
         0.375 * nu2 * factors.upsilon2 * k * k * k * k * (1.0 + 6.0 * z2 + z2 * z2) *
             (2.0 * p * p - p);
}

double zdc_unmodulated(int n, int beta, double nu1, double nu2, ChannelFactors factors) {
  require(n >= 0 && beta >= 0, "N and beta must be non-negative");
  const double a = n;
  const double b = beta;
  return 0.5 * nu1 * factors.upsilon1 * a * a * (b + 1.0) +
         0.375 * nu2 * factors.upsilon2 * a * a * a * a * (2.0 * b * b + 3.0 * b + 1.0);
}

double zdc_repeated(int n, int beta, double nu1, double nu2, ChannelFactors factors) {
  require(n >= 0 && beta >= 0, "N and beta must be non-negative");
  const double a = n;
  const double b1 = beta + 1.0;
  return 0.5 * nu1 * factors.upsilon1 * a * a * b1 * b1 +
         0.375 * nu2 * factors.upsilon2 * a * a * a * a * b1 * b1 * b1 * b1;
}

PerformanceGaps gaps(int n, int beta, double nu1, double nu2, ChannelFactors factors) {
  require(n >= 0 && beta >= 0, "N and beta must be non-negative");
  const double a2 = static_cast<double>(n) * n;
  const double a4 = a2 * a2;
  const double b = beta;
  const double c1 = nu1 * factors.upsilon1 * a2;
  const double c2 = nu2 * factors.upsilon2 * a4;
  PerformanceGaps g;
  g.xi1 = 0.5 * c1 * (b * b + b) + 0.375 * c2 * (b * b * b * b + 4.0 * b * b * b + 4.0 * b * b + b);
  g.xi2 = c1 * b + 1.5 * c2 * (b * b * b + b);
  return g;
}

double required_antennas(double sr_target, int beta, double gamma0) {
  require(sr_target > 0.5 && sr_target < 1.0, "required_antennas: target SR must lie in (0.5, 1)");
  require(beta >= 1, "beta must be a positive integer");
  require(gamma0 > 0.0, "gamma0 must be positive");
  const double phi = phi_opt(beta, gamma0).real;
  const double x = boost::math::erfc_inv(2.0 * (1.0 - sr_target));
  return x * x * reference_lambda(phi, beta, gamma0);
}

Region region(int n, int beta, double gamma0, double m, std::span<const double> gains,
              double nu1, double nu2) {
  require(beta >= 1, "region: beta must be a positive integer");
  const ChannelFactors factors = channel_factors(m, gains);
  const int phi_max = phi_opt(beta, gamma0).admissible;

  std::vector<int> phis;
  for (int d : divisors(beta)) {
    if (d <= phi_max) {
      phis.push_back(d);
    }
  }
  if (phis.empty() || n < 2) {
    throw std::invalid_argument("region: empty sweep (need N >= 2 and an admissible phi)");
  }

  const int splits = n - 1;
  const auto total = static_cast<std::ptrdiff_t>(phis.size()) * splits;
  Region out;
  out.points.resize(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const int phi = phis[static_cast<std::size_t>(idx / splits)];
    const int m_it = 1 + static_cast<int>(idx % splits);
    RegionPoint& pt = out.points[static_cast<std::size_t>(idx)];
    pt.phi = phi;
    pt.m_it = m_it;
    pt.k_eh = n - m_it;
    pt.sr = 1.0 - ber_awgn_continuous(m_it, phi, beta, gamma0);
    pt.zdc = zdc_srdcsk(pt.k_eh, phi, beta, nu1, nu2, factors);
  }

  for (const auto& p : out.points) {
    const bool dominated = std::any_of(out.points.begin(), out.points.end(), [&](const RegionPoint& q) {
      return q.sr >= p.sr && q.zdc >= p.zdc && (q.sr > p.sr || q.zdc > p.zdc);
    });
    if (!dominated) {
      out.pareto.push_back(p);
    }
  }
  return out;
}

}  // namespace chaoswipt

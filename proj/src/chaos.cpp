#include "chaoswipt/chaos.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chaoswipt {

namespace {

bool near_fixed_point(double x) noexcept {
  return std::abs(x) < kFixedPointGuard || std::abs(x - 1.0) < kFixedPointGuard ||
         std::abs(x + 1.0) < kFixedPointGuard;
}

}  // namespace

double draw_initial_value(Philox4x32& rng) {
  double x = 0.0;
  do {
    x = 2.0 * uniform01(rng) - 1.0;
  } while (near_fixed_point(x) || x <= -1.0);
  return x;
}

std::vector<double> iterate_map(double initial_value, std::size_t length, std::size_t burn_in) {
  double x = initial_value;
  for (std::size_t i = 0; i < burn_in; ++i) {
    x = chebyshev_step(x);
  }
  std::vector<double> out(length);
  for (auto& v : out) {
    v = x;
    x = chebyshev_step(x);
  }
  return out;
}

void fill_chaos(Philox4x32& rng, std::span<double> out) {
  double x = draw_initial_value(rng);
  for (std::size_t i = 0; i < kChaosBurnIn; ++i) {
    x = chebyshev_step(x);
  }
  for (auto& v : out) {
    v = x;
    x = chebyshev_step(x);
  }
}

ChaoticSequence generate_sequence(std::uint64_t seed, std::size_t length) {
  if (length == 0) {
    throw std::invalid_argument("generate_sequence: length must be at least 1");
  }
  Philox4x32 rng(seed, 0);
  ChaoticSequence seq;
  seq.seed = seed;
  seq.initial_value = draw_initial_value(rng);
  seq.samples = iterate_map(seq.initial_value, length, kChaosBurnIn);
  return seq;
}

double invariant_pdf(double x) noexcept {
  if (!(std::abs(x) < 1.0)) {
    return 0.0;
  }
  return 1.0 / (std::numbers::pi * std::sqrt(1.0 - x * x));
}

double invariant_cdf(double x) noexcept {
  if (x <= -1.0) {
    return 0.0;
  }
  if (x >= 1.0) {
    return 1.0;
  }
  return 2.0 / std::numbers::pi * std::asin(std::sqrt(0.5 * (x + 1.0)));
}

double chaotic_moment(unsigned order) {
  // E{x^(2j)} = C(2j, j) / 4^j for the arcsine law; odd moments vanish.
  static constexpr double kEven[] = {1.0, 0.5, 0.375, 0.3125, 70.0 / 256.0};
  if (order > 8) {
    throw std::domain_error("chaotic_moment: only orders 0..8 are tabulated");
  }
  return order % 2 == 1 ? 0.0 : kEven[order / 2];
}

}  // namespace chaoswipt

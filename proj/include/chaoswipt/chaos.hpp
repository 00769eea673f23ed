#pragma once

// Chebyshev-map chaotic sequences, x -> 4x^3 - 3x, and the statistics of
// their invariant (arcsine) distribution.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chaoswipt/rng.hpp"

namespace chaoswipt {

/// Iterations discarded after the uniform initial draw.
inline constexpr std::size_t kChaosBurnIn = 64;

/// Initial values closer than this to a fixed point {-1, 0, 1} are redrawn.
inline constexpr double kFixedPointGuard = 1e-12;

struct ChaoticSequence {
  std::vector<double> samples;
  std::uint64_t seed = 0;
  double initial_value = 0.0;
};

constexpr double chebyshev_step(double x) noexcept { return (4.0 * x * x - 3.0) * x; }

/// Uniform draw on (-1, 1) that avoids the map's fixed points.
double draw_initial_value(Philox4x32& rng);

/// Orbit of the map starting at `initial_value`: `burn_in` iterations are
/// discarded, then `length` consecutive values are returned (the first one is
/// the initial value itself when `burn_in` is zero).
std::vector<double> iterate_map(double initial_value, std::size_t length,
                                std::size_t burn_in = kChaosBurnIn);

/// Fresh chaotic segment for one trial: draws an initial value from `rng`,
/// runs the burn-in, then fills `out`.
void fill_chaos(Philox4x32& rng, std::span<double> out);

/// `length` samples seeded deterministically from `seed`. Throws
/// std::invalid_argument when length is zero.
ChaoticSequence generate_sequence(std::uint64_t seed, std::size_t length);

/// Arcsine density 1/(pi sqrt(1-x^2)) on the open interval (-1, 1), zero
/// elsewhere including the endpoints.
double invariant_pdf(double x) noexcept;

/// CDF of the invariant density: (2/pi) asin(sqrt((x+1)/2)).
double invariant_cdf(double x) noexcept;

/// Exact raw moment E{x^order} of the invariant density for order <= 8.
/// Throws std::domain_error above that.
double chaotic_moment(unsigned order);

}  // namespace chaoswipt

#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "chaoswipt/channel.hpp"
#include <boost/math/distributions/gamma.hpp>

#include "oracles.hpp"

using namespace chaoswipt;

namespace {

ChannelConfig nakagami(double m, std::vector<double> gains) {
  ChannelConfig c;
  c.m = m;
  c.gains = std::move(gains);
  return c;
}

ChannelConfig unit_link() {
  ChannelConfig c = nakagami(1.0, {1.0});
  c.distance = 1.0;
  return c;
}

ChannelRealization fixed(std::vector<double> alpha, std::size_t antennas = 1) {
  ChannelRealization r;
  r.antennas = antennas;
  r.paths = alpha.size() / antennas;
  r.alpha = std::move(alpha);
  return r;
}

SampleFrame frame_of(std::vector<double> xs) {
  SampleFrame f;
  f.samples = std::move(xs);
  f.data_bit = 1;
  return f;
}

}  // namespace

TEST_CASE("no-fading limit") {
  Philox4x32 rng(1, 0);
  const auto r = sample_channel(nakagami(1e6, {1.0}), 1000, rng);
  for (std::size_t n = 0; n < r.antennas; ++n) {
    CHECK(std::abs(r(0, n) - 1.0) < 0.01);
  }
  const auto nf = sample_channel(ChannelConfig::no_fading(), 3, rng);
  CHECK(nf.alpha == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("Rayleigh amplitude mean") {
  Philox4x32 rng(2, 0);
  const auto r = sample_channel(nakagami(1.0, {1.0}), 1'000'000, rng);
  double s = 0.0;
  for (double a : r.alpha) s += a;
  CHECK(std::abs(s / 1e6 - static_cast<double>(oracle::nakagami_moment(1, 1, 1))) < 0.003);
}

TEST_CASE("per-path powers") {
  Philox4x32 rng(3, 0);
  const auto r = sample_channel(nakagami(4.0, {0.6, 0.4}), 1'000'000, rng);
  double p1 = 0.0, p2 = 0.0;
  for (std::size_t n = 0; n < r.antennas; ++n) {
    p1 += r(0, n) * r(0, n);
    p2 += r(1, n) * r(1, n);
  }
  CHECK(p1 / 1e6 == doctest::Approx(0.6).epsilon(0.01));
  CHECK(p2 / 1e6 == doctest::Approx(0.4).epsilon(0.01));
}

TEST_CASE("squared amplitude is Gamma(m, omega/m)") {
  Philox4x32 rng(4, 0);
  const auto r = sample_channel(nakagami(2.5, {1.0}), 200000, rng);
  std::vector<double> p;
  for (double a : r.alpha) p.push_back(a * a);
  const boost::math::gamma_distribution<double> law(2.5, 1.0 / 2.5);
  CHECK(oracle::ks_statistic(p, [&](double x) { return x <= 0 ? 0.0 : boost::math::cdf(law, x); }) < 0.01);
}

TEST_CASE("Nakagami moments") {
  for (double m : {1.0, 2.0, 3.7}) {
    CHECK(nakagami_moment(2, m, 0.7) == doctest::Approx(0.7).epsilon(1e-14));
  }
  CHECK(nakagami_moment(4, 1, 1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(nakagami_moment(1, 2, 1) == doctest::Approx(0.93998).epsilon(1e-5));
  for (double n : {1.0, 3.0, 4.0}) {
    for (double m : {1.0, 4.0, 24.0}) {
      CHECK(nakagami_moment(n, m, 0.3) ==
            doctest::Approx(static_cast<double>(oracle::nakagami_moment(n, m, 0.3))).epsilon(1e-12));
    }
  }
  CHECK(nakagami_moment(3, 2, 0.0) == 0.0);
}

TEST_CASE("identity channel") {
  Philox4x32 rng(5, 0);
  const auto f = frame_of({0.1, -0.4, 0.9});
  const auto out = propagate(f, fixed({1.0}), unit_link(), 1.0, rng, false);
  REQUIRE(out.rows == 1);
  CHECK(std::vector<double>(out.row(0).begin(), out.row(0).end()) == f.samples);
}

TEST_CASE("zero delays use the coefficient sum") {
  Philox4x32 rng(6, 0);
  const auto cfg = [] {
    auto c = nakagami(1.0, {0.5, 0.5});
    c.distance = 1.0;
    return c;
  }();
  const auto f = frame_of({0.1, -0.4, 0.9});
  const auto out = propagate(f, fixed({0.6, 0.8}), cfg, 1.0, rng, false);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(out.row(0)[k] == doctest::Approx(1.4 * f.samples[k]).epsilon(1e-15));
  }
}

TEST_CASE("delayed paths shift with a zero-padded head") {
  Philox4x32 rng(7, 0);
  auto cfg = nakagami(1.0, {0.5, 0.5});
  cfg.distance = 1.0;
  cfg.delays = {0, 2};
  const auto f = frame_of({1.0, 2.0, 3.0, 4.0});
  const auto out = propagate(f, fixed({0.6, 0.8}), cfg, 1.0, rng, false);
  const std::vector<double> want = {0.6, 1.2, 1.8 + 0.8, 2.4 + 1.6};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(out.row(0)[k] == doctest::Approx(want[k]).epsilon(1e-15));
  }
  cfg.delays = {0, 0};
  const auto same = propagate(f, fixed({0.6, 0.8}), cfg, 1.0, rng, false);
  cfg.delays.clear();
  const auto flat = propagate(f, fixed({0.6, 0.8}), cfg, 1.0, rng, false);
  CHECK(same.data == flat.data);
  cfg.delays = {0, 4};
  CHECK_THROWS_AS(propagate(f, fixed({0.6, 0.8}), cfg, 1.0, rng, false), std::invalid_argument);
}

TEST_CASE("path loss and power scale the amplitude") {
  Philox4x32 rng(8, 0);
  ChannelConfig cfg = nakagami(1.0, {1.0});
  cfg.distance = 2.0;
  cfg.pathloss_exp = 2.0;
  const auto out = propagate(frame_of({1.0}), fixed({1.0}), cfg, 4.0, rng, false);
  CHECK(out.row(0)[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("noise variance is N0/2") {
  Philox4x32 rng(9, 0);
  ChannelConfig cfg = unit_link();
  cfg.noise_psd = 0.3;
  const auto out = propagate(frame_of(std::vector<double>(1'000'000, 0.0)), fixed({1.0}), cfg, 1.0, rng, true);
  double s = 0.0, s2 = 0.0;
  for (double w : out.data) {
    s += w;
    s2 += w * w;
  }
  const double mean = s / 1e6;
  CHECK(s2 / 1e6 - mean * mean == doctest::Approx(0.15).epsilon(0.01));
}

TEST_CASE("antennas receive independent noise") {
  Philox4x32 rng(10, 0);
  ChannelConfig cfg = unit_link();
  cfg.noise_psd = 2.0;
  const auto out = propagate(frame_of(std::vector<double>(50000, 0.0)), fixed({1.0, 1.0}, 2), cfg, 1.0, rng, true);
  double cross = 0.0;
  for (std::size_t k = 0; k < out.cols; ++k) cross += out.row(0)[k] * out.row(1)[k];
  CHECK(std::abs(cross / 50000.0) < 0.03);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(nakagami(1.0, {0.5, 0.4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(nakagami(0.5, {1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(nakagami(1.0, {0.5, -0.1, 0.6}).validate(), std::invalid_argument);
  auto c = nakagami(1.0, {0.5, 0.5});
  c.delays = {1, 2};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.delays = {0, 2, 3};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.delays = {0, 3};
  CHECK_NOTHROW(c.validate());
  CHECK(c.has_delays());
  c.distance = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("sampling is reproducible per stream") {
  Philox4x32 a(12, 3), b(12, 3);
  const auto cfg = nakagami(2.0, {0.7, 0.3});
  CHECK(sample_channel(cfg, 5, a).alpha == sample_channel(cfg, 5, b).alpha);
}

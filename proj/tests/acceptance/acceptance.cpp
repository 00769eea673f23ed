// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// numbers underneath. Exits non-zero if any criterion fails.

#include <boost/math/distributions/gamma.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "chaoswipt/analysis.hpp"
#include "chaoswipt/chaos.hpp"
#include "chaoswipt/montecarlo.hpp"
#include "oracles.hpp"

using namespace chaoswipt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Report {
  int passed = 0;
  int total = 0;

  void criterion(int id, const std::string& title, bool ok) {
    ++total;
    passed += ok ? 1 : 0;
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, title.c_str());
    std::fflush(stdout);
  }
};

template <typename... Args>
void detail(const char* fmt, Args... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

const double kG12 = std::pow(10.0, 1.2);
const double kG8 = std::pow(10.0, 0.8);
const double kPathLoss = std::pow(20.0, -4.0);

SimConfig ber_config(int m_it, std::uint64_t bits) {
  SimConfig c;
  c.waveform = WaveformSpec::sr_dcsk(80, 20, 1.0);
  c.channel = ChannelConfig::no_fading();
  c.channel.noise_psd = noise_psd_for(kG12, bit_energy(c.waveform), kPathLoss);
  c.split = ReceiverSplit::make(m_it, m_it);
  c.n_trials = bits;
  return c;
}

// ---------------------------------------------------------------------------

bool criterion1() {
  const auto t0 = Clock::now();
  const auto a = phi_opt(60, kG12);
  const double t_a = seconds_since(t0);
  const auto t1 = Clock::now();
  const auto b = phi_opt(60, kG8);
  const double t_b = seconds_since(t1);
  detail("phi_opt(60, 12 dB): real = %.6f, admissible = %d (%.1f us)", a.real, a.admissible, t_a * 1e6);
  detail("phi_opt(60, 8 dB):  real = %.6f, admissible = %d (%.1f us)", b.real, b.admissible, t_b * 1e6);
  return std::abs(a.real - 23.91) <= 0.01 && a.admissible == 20 && b.admissible == 15 && t_a < 1e-3 && t_b < 1e-3;
}

bool criterion2() {
  const auto divs = divisors(80);
  std::vector<double> ber;
  for (int d : divs) ber.push_back(ber_awgn(1, d, 80, kG12));
  const auto best = static_cast<std::size_t>(std::min_element(ber.begin(), ber.end()) - ber.begin());
  bool unimodal = true;
  for (std::size_t i = 0; i + 1 < ber.size(); ++i) {
    const bool down = ber[i + 1] < ber[i];
    if ((i < best && !down) || (i >= best && down)) unimodal = false;
  }
  const double real = phi_opt(80, kG12).real;
  int nearest = divs.front();
  for (int d : divs) {
    if (std::abs(d - real) < std::abs(nearest - real)) nearest = d;
  }
  std::string seq;
  for (std::size_t i = 0; i < divs.size(); ++i) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%d:%.4g", i ? " " : "", divs[i], ber[i]);
    seq += buf;
  }
  detail("BER over divisors of 80: %s", seq.c_str());
  detail("argmin phi = %d, divisor nearest phi_real=%.4f is %d, unimodal = %s", divs[best], real, nearest,
         unimodal ? "yes" : "no");
  detail("phi_opt(80, 12 dB).admissible (lower-Lambda bracketing divisor) = %d", phi_opt(80, kG12).admissible);
  return unimodal && divs[best] == nearest;
}

bool criterion3() {
  bool ok = true;
  for (int m_it = 1; m_it <= 4; ++m_it) {
    const auto t0 = Clock::now();
    const auto e = simulate_ber(ber_config(m_it, 1'000'000));
    const double theory = ber_awgn(m_it, 20, 80, kG12);
    const double tol = std::max(3 * e.std_error, 0.15 * theory);
    const bool pass = std::abs(e.value - theory) <= tol;
    ok = ok && pass;
    detail("AWGN M=%d: sim %.5g (se %.2g) vs theory %.5g, |diff| %.3g <= %.3g? %s  [%.1f s]", m_it, e.value,
           e.std_error, theory, std::abs(e.value - theory), tol, pass ? "yes" : "no", seconds_since(t0));
  }
  const int m_it = 2;
  for (double m : {1.0, 4.0}) {
    SimConfig c = ber_config(m_it, 10'000'000);
    c.channel.fading = FadingKind::Nakagami;
    c.channel.m = m;
    c.channel.gains = {0.5, 0.5};
    const auto t0 = Clock::now();
    const auto e = simulate_ber(c);
    const double secs = seconds_since(t0);
    const double theory = ber_fading(m_it, 20, 80, kG12, m, 2);
    const bool pass = std::abs(e.value - theory) <= 3 * e.std_error;
    ok = ok && pass;
    detail("Nakagami m=%g, L=2, Omega=(0.5,0.5), M=%d, zero delays: sim %.5g (se %.2g) vs quadrature %.5g, "
           "%.1f se apart  [%.1f s, target < 60 s]",
           m, m_it, e.value, e.std_error, theory, std::abs(e.value - theory) / e.std_error, secs);
  }
  // The dispersive path model (explicit chip delays) for comparison; not part of the verdict.
  for (double m : {1.0, 4.0}) {
    SimConfig c = ber_config(m_it, 1'000'000);
    c.channel.fading = FadingKind::Nakagami;
    c.channel.m = m;
    c.channel.gains = {0.5, 0.5};
    c.channel.delays = {0, 1};
    const auto e = simulate_ber(c);
    detail("  info: same with delays (0,1), 1e6 bits: sim %.5g (se %.2g) vs quadrature %.5g", e.value, e.std_error,
           ber_fading(m_it, 20, 80, kG12, m, 2));
  }
  return ok;
}

bool criterion4() {
  const double target = ber_awgn(3, 20, 80, kG12);
  const double db1 = oracle::bisect(
      [&](double db) { return ber_awgn_continuous(1, 20, 80, db_to_linear(db)) - target; }, 0.0, 40.0);
  const double gap = db1 - 12.0;
  detail("target BER = ber_awgn(3, 20, 80, 12 dB) = %.6g", target);
  detail("M=1 reaches it at %.4f dB; M=3 at 12 dB; gap %.4f dB (criterion: 12 +/- 1.5 dB)", db1, gap);
  return std::abs(gap - 12.0) <= 1.5;
}

bool criterion5() {
  const EhCircuit circuit{};
  const LinkBudget lb = LinkBudget::from_physical(1.0, 1.0, kPathLoss, circuit);
  const std::vector<double> flat = {1.0};
  const std::vector<double> sel = {0.6, 0.4};
  const auto f_flat = channel_factors(4.0, flat);
  const auto f_sel = channel_factors(4.0, sel);
  bool within = true;
  bool ordered = true;
  int fails = 0, points = 0;
  double worst = 0.0, worst_corr = 0.0;
  const auto t0 = Clock::now();
  for (int k = 1; k <= 3; ++k) {
    for (int phi : divisors(60)) {
      double sim_z[2] = {0, 0};
      double ana_z[2] = {0, 0};
      for (int which = 0; which < 2; ++which) {
        SimConfig c;
        c.waveform = WaveformSpec::sr_dcsk(60, phi, 1.0);
        c.channel.m = 4.0;
        c.channel.gains = which == 0 ? flat : sel;
        c.split = ReceiverSplit::make(k, 0);
        c.circuit = circuit;
        c.n_trials = 100000;
        c.eh_channel_mode = EhChannelMode::CommonAcrossAntennas;
        const auto f = which == 0 ? f_flat : f_sel;
        const auto e = simulate_zdc(c);
        const double closed = zdc_srdcsk(k, phi, 60, lb.nu1, lb.nu2, f);
        const double z = 60.0 / phi;
        const double corrected =
            closed + lb.nu2 * f.upsilon2 * std::pow(k, 4) * (1 + 6 * z * z + z * z * z * z) * (phi - 1) / 2.0;
        const double dev = e.value / closed - 1.0;
        const double dev_corr = e.value / corrected - 1.0;
        ++points;
        if (std::abs(dev) > 0.02) {
          ++fails;
          within = false;
          detail("K=%d phi=%2d %-9s sim %.5g vs closed form %.5g: %+.2f%%  (vs consecutive-iterate 4th moment: "
                 "%+.2f%%)",
                 k, phi, which == 0 ? "flat" : "selective", e.value, closed, 100 * dev, 100 * dev_corr);
        }
        worst = std::max(worst, std::abs(dev));
        worst_corr = std::max(worst_corr, std::abs(dev_corr));
        sim_z[which] = e.value;
        ana_z[which] = closed;
      }
      if (!(sim_z[1] > sim_z[0] && ana_z[1] > ana_z[0])) ordered = false;
    }
  }
  detail("%d/%d points outside 2%%; worst |deviation| %.2f%% (%.2f%% against the consecutive-iterate moment)",
         fails, points, 100 * worst, 100 * worst_corr);
  detail("frequency-selective > flat at every point (simulated and analytic): %s  [%.1f s]",
         ordered ? "yes" : "no", seconds_since(t0));
  return within && ordered;
}

bool criterion6() {
  const LinkBudget lb = LinkBudget::from_physical(1.0, 1.0, kPathLoss, EhCircuit{});
  const std::vector<double> omega = {0.6, 0.4};
  const auto f = channel_factors(4.0, omega);
  bool order = true, gap_order = true, identity = true;
  double worst_id = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int beta = 1; beta <= 100; ++beta) {
      const double um = zdc_unmodulated(n, beta, lb.nu1, lb.nu2, f);
      const double opt = zdc_srdcsk(n, 1, beta, lb.nu1, lb.nu2, f);
      const double pt = zdc_repeated(n, beta, lb.nu1, lb.nu2, f);
      const auto g = gaps(n, beta, lb.nu1, lb.nu2, f);
      order = order && um < opt && opt < pt;
      gap_order = gap_order && g.xi1 > g.xi2;
      const double rel = std::abs(g.xi1 - (pt - um)) / std::abs(pt - um);
      worst_id = std::max(worst_id, rel);
      identity = identity && rel <= 1e-12;
    }
  }
  detail("analytic z_UM < z_opt < z_PT for beta 1..100, N 1..3: %s", order ? "yes" : "no");
  detail("xi1 > xi2 everywhere: %s", gap_order ? "yes" : "no");
  detail("xi1 vs z_PT - z_UM: worst relative difference %.2g", worst_id);

  bool sim_ok = true;
  const auto t0 = Clock::now();
  for (int n = 1; n <= 3; ++n) {
    for (int beta : {10, 50, 100}) {
      auto run = [&](WaveformSpec w, std::uint64_t stream) {
        SimConfig c;
        c.waveform = w;
        c.channel.m = 4.0;
        c.channel.gains = omega;
        c.split = ReceiverSplit::make(n, 0);
        c.n_trials = 100000;
        c.master_seed = mix_seed(1, stream);
        return simulate_zdc(c);
      };
      const auto pt = run(WaveformSpec::repeated(beta), 1);
      const auto um = run(WaveformSpec::unmodulated(beta), 2);
      const auto opt = run(WaveformSpec::wpt_optimal(beta), 3);
      const auto g = gaps(n, beta, lb.nu1, lb.nu2, f);
      const double xi1 = pt.value - um.value, se1 = std::hypot(pt.std_error, um.std_error);
      const double xi2 = pt.value - opt.value, se2 = std::hypot(pt.std_error, opt.std_error);
      const double z = 1.959963984540054;
      const bool in1 = std::abs(xi1 - g.xi1) <= z * se1;
      const bool in2 = std::abs(xi2 - g.xi2) <= z * se2;
      sim_ok = sim_ok && in1 && in2;
      detail("N=%d beta=%3d: xi1 sim %.5g +/- %.2g vs %.5g (%s), xi2 sim %.5g +/- %.2g vs %.5g (%s)", n, beta, xi1,
             z * se1, g.xi1, in1 ? "in CI" : "OUT", xi2, z * se2, g.xi2, in2 ? "in CI" : "OUT");
    }
  }
  detail("simulated gaps inside their 95%% CIs: %s  [%.1f s]", sim_ok ? "yes" : "no", seconds_since(t0));
  return order && gap_order && identity && sim_ok;
}

bool criterion7() {
  const LinkBudget lb = LinkBudget::from_physical(1.0, 1.0, kPathLoss, EhCircuit{});
  const std::vector<std::vector<double>> omegas = {{1.0}, {0.8, 0.2}, {0.5, 0.5}};
  bool mono = true, shrink = true, split = true;
  for (const auto& omega : omegas) {
    const auto r1 = region(3, 60, kG12, 1.0, omega, lb.nu1, lb.nu2);
    const auto r24 = region(3, 60, kG12, 24.0, omega, lb.nu1, lb.nu2);
    for (int m_it = 1; m_it <= 2; ++m_it) {
      const RegionPoint* prev = nullptr;
      for (const auto& p : r1.points) {
        if (p.m_it != m_it) continue;
        if (prev && (p.sr < prev->sr || p.zdc > prev->zdc)) mono = false;
        prev = &p;
      }
    }
    for (std::size_t i = 0; i < r1.points.size(); ++i) {
      if (!(r1.points[i].zdc > r24.points[i].zdc)) shrink = false;
    }
    for (const auto& p : r1.points) {
      for (const auto& q : r1.points) {
        if (q.phi == p.phi && q.m_it == p.m_it + 1 && !(q.sr > p.sr && q.zdc < p.zdc)) split = false;
      }
    }
  }
  detail("SR nondecreasing and z_DC nonincreasing in phi at fixed (M,K): %s", mono ? "yes" : "no");
  detail("m=1 cloud above m=24 cloud in z_DC pointwise: %s", shrink ? "yes" : "no");
  detail("larger M raises SR and lowers z_DC pointwise: %s", split ? "yes" : "no");
  return mono && shrink && split;
}

bool criterion8() {
  bool ok = true;

  const auto seq = generate_sequence(8, 1'000'000);
  const double ks_chaos = oracle::ks_statistic(seq.samples, invariant_cdf);
  detail("Chebyshev samples vs arcsine law: KS = %.5f (< 0.01)", ks_chaos);
  ok = ok && ks_chaos < 0.01;

  {
    const int m_it = 2, paths = 2;
    const double m = 2.0;
    ChannelConfig c;
    c.m = m;
    c.gains = {0.5, 0.5};
    Philox4x32 rng(88, 0);
    std::vector<double> kappa(1'000'000);
    for (auto& k : kappa) {
      const auto r = sample_channel(c, m_it, rng);
      k = 0.0;
      for (double a : r.alpha) k += a * a;
    }
    const boost::math::gamma_distribution<double> law(m_it * m * paths, 1.0 / (m * paths));
    const double ks = oracle::ks_statistic(kappa, [&](double x) { return x <= 0 ? 0.0 : boost::math::cdf(law, x); });
    detail("kappa (M=2, m=2, L=2) vs Gamma(MmL, 1/(mL)): KS = %.5f (< 0.01)", ks);
    ok = ok && ks < 0.01;
  }

  {
    // Fixed channel and a fixed reference with sum x^2 = phi/2; only the noise is redrawn.
    const int phi = 10, beta = 40, m_it = 2;
    const std::vector<double> alpha = {0.8, 1.1};
    const double kappa = alpha[0] * alpha[0] + alpha[1] * alpha[1];
    const WaveformSpec w = WaveformSpec::sr_dcsk(beta, phi, 1.0);
    const double eb = bit_energy(w);
    const double n0 = noise_psd_for(kG8, eb, kPathLoss);
    std::vector<double> chips(phi);
    Philox4x32 crng(5, 5);
    fill_chaos(crng, chips);
    double e = 0.0;
    for (double x : chips) e += x * x;
    for (double& x : chips) x *= std::sqrt(phi / 2.0 / e);
    ChannelConfig cfg = ChannelConfig::no_fading();
    cfg.noise_psd = n0;
    ChannelRealization real;
    real.paths = 1;
    real.antennas = m_it;
    real.alpha = alpha;
    const double amplitude = std::sqrt(kPathLoss);
    for (int d : {1, -1}) {
      std::vector<double> frame(w.frame_length());
      write_frame(w, d, chips, frame);
      const int n = 200000;
      std::vector<double> stat(n);
      SampleMatrix rx;
      for (int t = 0; t < n; ++t) {
        Philox4x32 rng = trial_stream(31, static_cast<std::uint64_t>(t));
        propagate_into(frame, real, cfg, amplitude, rng, true, rx);
        double s = 0.0;
        for (int a = 0; a < m_it; ++a) s += it_decision_statistic(rx.row(a), phi, beta);
        stat[t] = s;
      }
      const auto ms = oracle::mean_se(stat);
      double m2 = 0.0, m4 = 0.0;
      for (double v : stat) {
        const double c = v - ms.mean;
        m2 += c * c;
        m4 += c * c * c * c;
      }
      m2 /= n;
      m4 /= n;
      const double var = m2 * n / (n - 1.0);
      const double se_var = std::sqrt((m4 - m2 * m2) / n);
      const auto dm = decision_moments(d, kappa, m_it, phi, beta, eb, kPathLoss, n0);
      const double zm = std::abs(ms.mean - dm.mean) / ms.se;
      const double zv = std::abs(var - dm.variance) / se_var;
      detail("decision statistic d=%+d: mean %.5g vs %.5g (%.2f se), variance %.5g vs %.5g (%.2f se)", d, ms.mean,
             dm.mean, zm, var, dm.variance, zv);
      ok = ok && zm <= 3 && zv <= 3;
    }
  }

  {
    const double nu1 = 1.0625e-6, nu2 = 3.7392578125e-8;
    double worst = 0.0;
    for (int k : {1, 2, 3}) {
      for (int phi : {1, 3, 5, 12}) {
        const int beta = 60;
        const double z = static_cast<double>(beta) / phi;
        for (double m : {1.0, 4.0, 24.0}) {
          const double ff = nu1 * k * k * phi / 2.0 * (1 + z * z) + 3 * nu2 * std::pow(k, 4) / 8.0 * ((1 + m) / m) *
                                                                         (1 + 6 * z * z + std::pow(z, 4)) *
                                                                         (2.0 * phi * phi - phi);
          const double got = zdc_srdcsk(k, phi, beta, nu1, nu2, channel_factors(m, std::vector<double>{1.0}));
          worst = std::max(worst, std::abs(got - ff) / ff);
        }
      }
    }
    for (double m : {1.0, 2.0, 4.0, 24.0}) {
      for (double o1 : {0.5, 0.6, 0.8}) {
        for (int beta : {1, 10, 60}) {
          const double o2 = 1.0 - o1;
          const double g = std::exp(std::lgamma(m + 0.5) - std::lgamma(m));
          const double b = beta;
          const double fs =
              nu1 / 2 * (1 + b * b) * (1 + 2 / m * g * g * std::sqrt(o1 * o2)) +
              3 * nu2 / 8 * (1 + 6 * b * b + b * b * b * b) *
                  ((o1 * o1 + o2 * o2) * (m + 1) / m + 6 * o1 * o2 +
                   4 * std::exp(std::lgamma(1.5 + m) + std::lgamma(0.5 + m) - 2 * std::lgamma(m)) / (m * m) *
                       (std::sqrt(o1) * std::pow(o2, 1.5) + std::pow(o1, 1.5) * std::sqrt(o2)));
          const double got = zdc_srdcsk(1, 1, beta, nu1, nu2, channel_factors(m, std::vector<double>{o1, o2}));
          worst = std::max(worst, std::abs(got - fs) / fs);
        }
      }
    }
    detail("flat-fading and two-path single-antenna reductions: worst relative difference %.2g (<= 1e-12)", worst);
    ok = ok && worst <= 1e-12;
  }

  {
    SimConfig b = ber_config(2, 40000);
    b.channel.fading = FadingKind::Nakagami;
    b.channel.gains = {0.5, 0.5};
    SimConfig z;
    z.waveform = WaveformSpec::sr_dcsk(60, 5, 1.0);
    z.channel.m = 4.0;
    z.channel.gains = {0.6, 0.4};
    z.split = ReceiverSplit::make(2, 0);
    z.n_trials = 20000;
    const auto rb = simulate_ber_serial(b);
    const auto rz = simulate_zdc_serial(z);
    bool same = true;
    for (int w = 1; w <= 4; ++w) {
      const auto eb = simulate_ber(b, w);
      const auto ez = simulate_zdc(z, w);
      same = same && eb.value == rb.value && eb.std_error == rb.std_error && ez.value == rz.value &&
             ez.std_error == rz.std_error && ez.ci_lo == rz.ci_lo && ez.ci_hi == rz.ci_hi;
    }
    detail("simulate_ber / simulate_zdc identical to the serial reference for 1..4 workers: %s",
           same ? "yes" : "no");
    ok = ok && same;
  }
  return ok;
}

}  // namespace

int main() {
  Report r;
  const auto t0 = Clock::now();
  r.criterion(1, "phi_opt reproduction", criterion1());
  r.criterion(2, "BER unimodal over divisors, minimum at the divisor nearest phi_real", criterion2());
  r.criterion(3, "simulated vs analytic BER (AWGN and Nakagami)", criterion3());
  r.criterion(4, "M=1 to M=3 diversity gap of 12 +/- 1.5 dB", criterion4());
  r.criterion(5, "simulated vs analytic harvested DC within 2%", criterion5());
  r.criterion(6, "waveform ordering and performance gaps", criterion6());
  r.criterion(7, "region monotonicity", criterion7());
  r.criterion(8, "statistical and structural invariants", criterion8());
  std::printf("acceptance: %d/%d criteria passed (%.1f s)\n", r.passed, r.total, seconds_since(t0));
  return r.passed == r.total ? 0 : 1;
}

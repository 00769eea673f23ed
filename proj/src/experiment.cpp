#include "chaoswipt/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "chaoswipt/analysis.hpp"
#include "chaoswipt/montecarlo.hpp"

namespace chaoswipt {

namespace {

enum class KeyType { Integer, Real, Text, RealVector, IntVector };

struct KeyInfo {
  std::string name;
  KeyType type;
  std::optional<std::string> fallback;
};

const std::vector<KeyInfo>& key_table() {
  static const std::vector<KeyInfo> table = {
      {"waveform", KeyType::Text, "srdcsk"},
      {"N", KeyType::Integer, std::nullopt},
      {"M", KeyType::Integer, std::nullopt},
      {"K", KeyType::Integer, std::nullopt},
      {"beta", KeyType::Integer, std::nullopt},
      {"phi", KeyType::Integer, std::nullopt},
      {"gamma0_db", KeyType::Real, std::nullopt},
      {"n0", KeyType::Real, std::nullopt},
      {"m", KeyType::Real, std::nullopt},
      {"L", KeyType::Integer, std::nullopt},
      {"omega", KeyType::RealVector, std::nullopt},
      {"delays", KeyType::IntVector, std::nullopt},
      {"k2", KeyType::Real, "0.0034"},
      {"k4", KeyType::Real, "0.3829"},
      {"r_ant", KeyType::Real, "50"},
      {"pt_dbm", KeyType::Real, "30"},
      {"r", KeyType::Real, "20"},
      {"a", KeyType::Real, "4"},
      {"bits", KeyType::Integer, "100000"},
      {"frames", KeyType::Integer, "10000"},
      {"eh_mode", KeyType::Text, "common"},
      {"eh_noise", KeyType::Integer, "0"},
      {"target_ci", KeyType::Real, std::nullopt},
  };
  return table;
}

const KeyInfo& key_info(std::string_view key) {
  for (const auto& k : key_table()) {
    if (k.name == key) {
      return k;
    }
  }
  throw ConfigError("unknown key '" + std::string(key) + "'");
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) {
      return parts;
    }
    start = pos + 1;
  }
}

std::optional<double> to_real(const std::string& s) {
  if (s.empty()) {
    return std::nullopt;
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<long long> to_integer(const std::string& s) {
  if (s.empty()) {
    return std::nullopt;
  }
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) {
    return std::nullopt;
  }
  return v;
}

std::string fmt(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(long long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

[[noreturn]] void bad_value(const std::string& key, const ConfigValue& cv, const std::string& why) {
  throw ConfigError(cv.origin + ": invalid value '" + cv.text + "' for key '" + key + "': " + why);
}

// Expands one configured value into its sweep alternatives, checking types.
std::vector<std::string> alternatives(const std::string& key, const ConfigValue& cv) {
  const KeyInfo& info = key_info(key);
  std::vector<std::string> out;
  if (info.type == KeyType::RealVector || info.type == KeyType::IntVector) {
    for (const auto& alt : split(cv.text, ';')) {
      for (const auto& elem : split(alt, ',')) {
        const bool ok = info.type == KeyType::RealVector ? to_real(elem).has_value()
                                                         : to_integer(elem).has_value();
        if (!ok) {
          bad_value(key, cv, "expected a comma-separated list of numbers");
        }
      }
      out.push_back(alt);
    }
    return out;
  }
  if (info.type == KeyType::Text) {
    return split(cv.text, ',');
  }
  for (const auto& item : split(cv.text, ',')) {
    const auto colon = split(item, ':');
    if (colon.size() == 3) {
      const auto start = to_real(colon[0]);
      const auto step = to_real(colon[1]);
      const auto stop = to_real(colon[2]);
      if (!start || !step || !stop || !(*step > 0.0) || *stop < *start) {
        bad_value(key, cv, "ranges are start:step:stop with step > 0 and stop >= start");
      }
      const auto count = static_cast<long long>(std::floor((*stop - *start) / *step + 1e-9)) + 1;
      for (long long i = 0; i < count; ++i) {
        const double v = *start + static_cast<double>(i) * *step;
        if (info.type == KeyType::Integer) {
          if (v != std::floor(v)) {
            bad_value(key, cv, "integer key with a non-integer range");
          }
          out.push_back(fmt(static_cast<long long>(v)));
        } else {
          out.push_back(fmt(v));
        }
      }
      continue;
    }
    if (colon.size() != 1) {
      bad_value(key, cv, "malformed range");
    }
    const bool ok = info.type == KeyType::Integer ? to_integer(item).has_value()
                                                  : to_real(item).has_value();
    if (!ok) {
      bad_value(key, cv, info.type == KeyType::Integer ? "expected an integer" : "expected a number");
    }
    out.push_back(item);
  }
  if (out.empty()) {
    bad_value(key, cv, "empty sweep list");
  }
  return out;
}

// One point of the parameter sweep.
class Point {
 public:
  explicit Point(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string text(const std::string& key) const {
    if (auto it = values_.find(key); it != values_.end()) {
      return it->second;
    }
    const auto& info = key_info(key);
    return info.fallback.value_or("");
  }
  double real(const std::string& key) const { return to_real(text(key)).value(); }
  int integer(const std::string& key) const { return static_cast<int>(to_integer(text(key)).value()); }
  std::uint64_t count(const std::string& key) const {
    const auto v = to_integer(text(key)).value();
    if (v < 1) {
      throw std::invalid_argument(key + " must be at least 1");
    }
    return static_cast<std::uint64_t>(v);
  }
  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& e : split(text(key), ',')) {
      out.push_back(to_real(e).value());
    }
    return out;
  }
  std::vector<int> ints(const std::string& key) const {
    std::vector<int> out;
    for (const auto& e : split(text(key), ',')) {
      out.push_back(static_cast<int>(to_integer(e).value()));
    }
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
};

std::vector<Point> expand(const ConfigMap& values) {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& key : known_keys()) {
    if (auto it = values.find(key); it != values.end()) {
      axes.emplace_back(key, alternatives(key, it->second));
    }
  }
  std::vector<Point> points;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    std::map<std::string, std::string> v;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      v[axes[a].first] = axes[a].second[idx[a]];
    }
    points.emplace_back(std::move(v));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) {
        break;
      }
      idx[a] = 0;
      if (a == 0) {
        return points;
      }
    }
    if (axes.empty()) {
      return points;
    }
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') {
      q += '"';
    }
    q += c;
  }
  return q + "\"";
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), width_(header.size()) {
    row(header);
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < width_; ++i) {
      if (i > 0) {
        out_ << ',';
      }
      out_ << (i < fields.size() ? csv_field(fields[i]) : std::string());
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  std::size_t width_;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string status_of(const std::exception& e) { return std::string("error: ") + e.what(); }

// ---------------------------------------------------------------------------
// Shared model construction

struct Physical {
  double transmit_power;
  double path_loss;
  EhCircuit circuit;
};

Physical physical(const Point& p) {
  Physical ph{dbm_to_watts(p.real("pt_dbm")), std::pow(p.real("r"), -p.real("a")),
              EhCircuit{p.real("k2"), p.real("k4"), p.real("r_ant")}};
  ph.circuit.validate();
  return ph;
}

std::vector<double> gains_of(const Point& p) {
  if (p.has("omega")) {
    auto g = p.reals("omega");
    if (p.has("L") && static_cast<int>(g.size()) != p.integer("L")) {
      throw std::invalid_argument("L does not match the number of omega entries");
    }
    return g;
  }
  const int paths = p.has("L") ? p.integer("L") : 1;
  if (paths < 1) {
    throw std::invalid_argument("L must be at least 1");
  }
  return std::vector<double>(static_cast<std::size_t>(paths), 1.0 / paths);
}

int paths_of(const Point& p) { return static_cast<int>(gains_of(p).size()); }

ChannelConfig channel_of(const Point& p) {
  ChannelConfig c;
  if (p.has("m")) {
    c.fading = FadingKind::Nakagami;
    c.m = p.real("m");
    c.gains = gains_of(p);
  } else {
    c.fading = FadingKind::NoFading;
    c.gains = {1.0};
  }
  c.distance = p.real("r");
  c.pathloss_exp = p.real("a");
  if (p.has("delays")) {
    c.delays = p.ints("delays");
  }
  c.validate();
  return c;
}

ChannelFactors factors_of(const Point& p) {
  if (!p.has("m")) {
    return {1.0, 1.0};
  }
  const auto g = gains_of(p);
  return channel_factors(p.real("m"), g);
}

WaveformSpec waveform_of(const Point& p, double transmit_power) {
  WaveformSpec w;
  w.kind = parse_waveform_kind(p.text("waveform"));
  w.beta = p.integer("beta");
  w.transmit_power = transmit_power;
  switch (w.kind) {
    case WaveformKind::SrDcsk: w.phi = p.integer("phi"); break;
    case WaveformKind::Dcsk: w.phi = w.beta; break;
    default: w.phi = 1; break;
  }
  w.validate();
  return w;
}

double zdc_analytic_for(const WaveformSpec& w, int k_eh, const LinkBudget& lb, ChannelFactors f) {
  switch (w.kind) {
    case WaveformKind::SrDcsk:
    case WaveformKind::Dcsk:
    case WaveformKind::WptOptSrDcsk: return zdc_srdcsk(k_eh, w.reference_length(), w.beta, lb.nu1, lb.nu2, f);
    case WaveformKind::Unmodulated: return zdc_unmodulated(k_eh, w.beta, lb.nu1, lb.nu2, f);
    case WaveformKind::Repeated: return zdc_repeated(k_eh, w.beta, lb.nu1, lb.nu2, f);
  }
  return 0.0;
}

EhChannelMode eh_mode_of(const Point& p) {
  const auto s = p.text("eh_mode");
  if (s == "common") {
    return EhChannelMode::CommonAcrossAntennas;
  }
  if (s == "independent") {
    return EhChannelMode::Independent;
  }
  throw std::invalid_argument("eh_mode must be 'common' or 'independent'");
}

// ---------------------------------------------------------------------------
// Commands

struct CommandInfo {
  std::vector<std::string> required;
  std::vector<std::string> echo;
  std::vector<std::string> outputs;
};

const CommandInfo& command_info(Command c) {
  static const std::vector<std::string> eh_consts = {"k2", "k4", "r_ant", "pt_dbm", "r", "a"};
  auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  static const std::map<Command, CommandInfo> table = {
      {Command::BerAnalytic,
       {{"beta", "phi", "gamma0_db", "M"}, {"beta", "phi", "gamma0_db", "M", "m", "L"}, {"ber", "status"}}},
      {Command::BerSim,
       {{"beta", "phi", "gamma0_db", "M"},
        {"waveform", "beta", "phi", "gamma0_db", "M", "m", "omega", "delays", "bits", "pt_dbm", "r", "a"},
        {"ber_sim", "stderr", "ci_lo", "ci_hi", "n_bits", "ber_analytic", "status"}}},
      {Command::ZdcAnalytic,
       {{"beta", "K"},
        with({"waveform", "beta", "phi", "K", "m", "omega"}, eh_consts),
        {"upsilon1", "upsilon2", "nu1", "nu2", "zdc", "status"}}},
      {Command::ZdcSim,
       {{"beta", "K"},
        with({"waveform", "beta", "phi", "K", "m", "omega", "frames", "eh_mode", "eh_noise", "n0"}, eh_consts),
        {"zdc_sim", "stderr", "ci_lo", "ci_hi", "n_frames", "zdc_analytic", "status"}}},
      {Command::PhiOpt,
       {{"beta", "gamma0_db"}, {"beta", "gamma0_db"}, {"phi_real", "phi_admissible", "phi_nearest", "status"}}},
      {Command::Region,
       {{"N", "beta", "gamma0_db", "m"},
        with({"N", "beta", "gamma0_db", "m", "omega"}, eh_consts),
        {"phi", "M", "K", "sr", "zdc", "pareto", "status"}}},
      {Command::Gap,
       {{"N", "beta"},
        with({"N", "beta", "m", "omega", "frames"}, eh_consts),
        {"zdc_um", "zdc_opt", "zdc_pt", "xi1", "xi2", "xi1_sim", "xi1_stderr", "xi2_sim", "xi2_stderr",
         "status"}}},
  };
  return table.at(c);
}

using RowFn = std::function<std::vector<std::vector<std::string>>(const Point&)>;

std::vector<std::vector<std::string>> ber_analytic_rows(const Point& p) {
  const int m_it = p.integer("M");
  const int phi = p.integer("phi");
  const int beta = p.integer("beta");
  const double g0 = db_to_linear(p.real("gamma0_db"));
  const double ber = p.has("m") ? ber_fading(m_it, phi, beta, g0, p.real("m"), paths_of(p))
                                : ber_awgn(m_it, phi, beta, g0);
  return {{fmt(ber), "ok"}};
}

struct BerRun {
  Estimate sim;
  double analytic;
};

BerRun ber_sim_point(const Point& p, std::uint64_t seed, int workers) {
  const Physical ph = physical(p);
  const WaveformSpec w = waveform_of(p, ph.transmit_power);
  const double g0 = db_to_linear(p.real("gamma0_db"));
  SimConfig c;
  c.waveform = w;
  c.channel = channel_of(p);
  c.channel.noise_psd = noise_psd_for(g0, bit_energy(w), ph.path_loss);
  c.split = ReceiverSplit::make(p.integer("M"), p.integer("M"));
  c.circuit = ph.circuit;
  c.n_trials = p.count("bits");
  c.master_seed = seed;
  if (p.has("target_ci")) {
    c.target_relative_ci = p.real("target_ci");
  }
  const int ref = w.reference_length();
  BerRun run;
  run.analytic = p.has("m") ? ber_fading(c.split.n_it, ref, w.beta, g0, c.channel.m,
                                         static_cast<int>(c.channel.paths()))
                            : ber_awgn(c.split.n_it, ref, w.beta, g0);
  run.sim = simulate_ber(c, workers);
  return run;
}

std::vector<std::string> estimate_fields(const Estimate& e) {
  return {fmt(e.value), fmt(e.std_error), fmt(e.ci_lo), fmt(e.ci_hi), fmt(e.n_trials)};
}

struct ZdcRun {
  Estimate sim;
  double analytic;
};

ZdcRun zdc_sim_point(const Point& p, std::uint64_t seed, int workers) {
  const Physical ph = physical(p);
  const WaveformSpec w = waveform_of(p, ph.transmit_power);
  const int k_eh = p.integer("K");
  SimConfig c;
  c.waveform = w;
  c.channel = channel_of(p);
  c.split = ReceiverSplit::make(k_eh, 0);
  c.circuit = ph.circuit;
  c.n_trials = p.count("frames");
  c.master_seed = seed;
  c.eh_channel_mode = eh_mode_of(p);
  c.eh_noise = p.integer("eh_noise") != 0;
  if (c.eh_noise) {
    if (p.has("n0")) {
      c.channel.noise_psd = p.real("n0");
    } else if (p.has("gamma0_db") && w.carries_data()) {
      c.channel.noise_psd = noise_psd_for(db_to_linear(p.real("gamma0_db")), bit_energy(w), ph.path_loss);
    } else {
      throw std::invalid_argument("eh_noise needs n0 (or gamma0_db with a data-bearing waveform)");
    }
  }
  const LinkBudget lb = LinkBudget::from_physical(1.0, ph.transmit_power, ph.path_loss, ph.circuit);
  ZdcRun run;
  run.analytic = zdc_analytic_for(w, k_eh, lb, factors_of(p));
  run.sim = simulate_zdc(c, workers);
  return run;
}

struct GapRun {
  double zdc_um, zdc_opt, zdc_pt;
  PerformanceGaps analytic;
  std::optional<Estimate> xi1_sim, xi2_sim;
};

Estimate difference(const Estimate& a, const Estimate& b) {
  Estimate d;
  d.value = a.value - b.value;
  d.std_error = std::hypot(a.std_error, b.std_error);
  d.n_trials = std::min(a.n_trials, b.n_trials);
  d.ci_lo = d.value - 1.959963984540054 * d.std_error;
  d.ci_hi = d.value + 1.959963984540054 * d.std_error;
  return d;
}

GapRun gap_point(const Point& p, std::uint64_t seed, int workers, bool simulate) {
  const Physical ph = physical(p);
  const int n = p.integer("N");
  const int beta = p.integer("beta");
  const ChannelFactors f = factors_of(p);
  const LinkBudget lb = LinkBudget::from_physical(1.0, ph.transmit_power, ph.path_loss, ph.circuit);
  GapRun run;
  run.zdc_um = zdc_unmodulated(n, beta, lb.nu1, lb.nu2, f);
  run.zdc_opt = zdc_srdcsk(n, 1, beta, lb.nu1, lb.nu2, f);
  run.zdc_pt = zdc_repeated(n, beta, lb.nu1, lb.nu2, f);
  run.analytic = gaps(n, beta, lb.nu1, lb.nu2, f);
  if (simulate) {
    SimConfig c;
    c.channel = channel_of(p);
    c.split = ReceiverSplit::make(n, 0);
    c.circuit = ph.circuit;
    c.n_trials = p.count("frames");
    auto sim = [&](WaveformSpec w, std::uint64_t stream) {
      c.waveform = w;
      c.master_seed = mix_seed(seed, stream);
      return simulate_zdc(c, workers);
    };
    const Estimate pt = sim(WaveformSpec::repeated(beta, ph.transmit_power), 1);
    const Estimate um = sim(WaveformSpec::unmodulated(beta, ph.transmit_power), 2);
    const Estimate opt = sim(WaveformSpec::wpt_optimal(beta, ph.transmit_power), 3);
    run.xi1_sim = difference(pt, um);
    run.xi2_sim = difference(pt, opt);
  }
  return run;
}

void write_header_comments(std::ostream& out, const ExperimentSpec& spec,
                           const std::vector<std::string>& notes) {
  if (spec.timestamp) {
    out << "# chaoswipt " << to_string(spec.command);
    if (!spec.figure.empty()) {
      out << ' ' << spec.figure;
    }
    out << " generated " << utc_timestamp() << '\n';
  }
  for (const auto& n : notes) {
    out << "# " << n << '\n';
  }
}

const char* kNoiseNote =
    "N0 derived from gamma0 as r^-a * eps_b / gamma0, eps_b = P_t * T_c * (phi + beta) / 2, T_c = 1";

// ---------------------------------------------------------------------------
// Figure presets

struct PresetContext {
  const ExperimentSpec& spec;
  const Point& base;  // physical constants, bits, frames
  std::ostream& out;
};

Point preset_point(const Point& base, std::map<std::string, std::string> values) {
  for (const auto& key : {"k2", "k4", "r_ant", "pt_dbm", "r", "a", "bits", "frames"}) {
    if (!values.count(key)) {
      values[key] = base.text(key);
    }
  }
  return Point(std::move(values));
}

void fig3(const PresetContext& ctx) {
  write_header_comments(ctx.out, ctx.spec,
                        {"fig3: BER vs phi, AWGN, beta=80, gamma0=12 dB", kNoiseNote});
  CsvWriter csv(ctx.out, {"phi", "M", "ber_analytic", "ber_sim", "stderr", "status"});
  for (int phi : divisors(80)) {
    for (int m_it = 1; m_it <= 4; ++m_it) {
      const Point p = preset_point(ctx.base, {{"beta", "80"}, {"phi", fmt(phi)}, {"gamma0_db", "12"},
                                              {"M", fmt(m_it)}});
      try {
        const BerRun r = ber_sim_point(p, ctx.spec.seed, ctx.spec.workers);
        csv.row({fmt(phi), fmt(m_it), fmt(r.analytic), fmt(r.sim.value), fmt(r.sim.std_error), "ok"});
      } catch (const std::exception& e) {
        csv.row({fmt(phi), fmt(m_it), "", "", "", status_of(e)});
      }
    }
  }
}

void fig4(const PresetContext& ctx) {
  write_header_comments(ctx.out, ctx.spec,
                        {"fig4: BER vs gamma0, beta=80, phi=20; fading channels use L=2, omega=(0.5,0.5)",
                         kNoiseNote});
  CsvWriter csv(ctx.out, {"channel", "gamma0_db", "M", "ber_analytic", "ber_sim", "stderr", "status"});
  const std::vector<std::pair<std::string, std::string>> channels = {{"awgn", ""}, {"m=1", "1"}, {"m=4", "4"}};
  for (const auto& [label, m] : channels) {
    for (int g = 0; g <= 16; g += 2) {
      for (int m_it = 1; m_it <= 3; ++m_it) {
        std::map<std::string, std::string> v = {
            {"beta", "80"}, {"phi", "20"}, {"gamma0_db", fmt(g)}, {"M", fmt(m_it)}};
        if (!m.empty()) {
          v["m"] = m;
          v["omega"] = "0.5,0.5";
        }
        const Point p = preset_point(ctx.base, v);
        try {
          const BerRun r = ber_sim_point(p, ctx.spec.seed, ctx.spec.workers);
          csv.row({label, fmt(g), fmt(m_it), fmt(r.analytic), fmt(r.sim.value), fmt(r.sim.std_error), "ok"});
        } catch (const std::exception& e) {
          csv.row({label, fmt(g), fmt(m_it), "", "", "", status_of(e)});
        }
      }
    }
  }
}

void fig5(const PresetContext& ctx) {
  write_header_comments(ctx.out, ctx.spec,
                        {"fig5: z_DC vs phi, beta=60, m=4; flat omega=(1), frequency-selective omega=(0.6,0.4); "
                         "EH channel common across antennas, EH noise off"});
  CsvWriter csv(ctx.out, {"channel", "phi", "K", "zdc_analytic", "zdc_sim", "stderr", "status"});
  const std::vector<std::pair<std::string, std::string>> channels = {{"flat", "1"}, {"selective", "0.6,0.4"}};
  for (const auto& [label, omega] : channels) {
    for (int phi : divisors(60)) {
      for (int k = 1; k <= 3; ++k) {
        const Point p = preset_point(ctx.base, {{"beta", "60"}, {"phi", fmt(phi)}, {"K", fmt(k)},
                                                {"m", "4"}, {"omega", omega}});
        try {
          const ZdcRun r = zdc_sim_point(p, ctx.spec.seed, ctx.spec.workers);
          csv.row({label, fmt(phi), fmt(k), fmt(r.analytic), fmt(r.sim.value), fmt(r.sim.std_error), "ok"});
        } catch (const std::exception& e) {
          csv.row({label, fmt(phi), fmt(k), "", "", "", status_of(e)});
        }
      }
    }
  }
}

void fig6a(const PresetContext& ctx) {
  write_header_comments(ctx.out, ctx.spec, {"fig6a: SR-z_DC region, N=3, M=2, K=1, gamma0=12 dB, beta=60"});
  CsvWriter csv(ctx.out, {"m", "omega1", "phi", "sr", "zdc", "status"});
  const Physical ph = physical(ctx.base);
  const LinkBudget lb = LinkBudget::from_physical(1.0, ph.transmit_power, ph.path_loss, ph.circuit);
  const std::vector<std::vector<double>> omegas = {{1.0}, {0.8, 0.2}, {0.5, 0.5}};
  for (double m : {1.0, 24.0}) {
    for (const auto& omega : omegas) {
      try {
        const Region reg = region(3, 60, db_to_linear(12.0), m, omega, lb.nu1, lb.nu2);
        for (const auto& pt : reg.points) {
          if (pt.m_it == 2) {
            csv.row({fmt(m), fmt(omega.front()), fmt(pt.phi), fmt(pt.sr), fmt(pt.zdc), "ok"});
          }
        }
      } catch (const std::exception& e) {
        csv.row({fmt(m), fmt(omega.front()), "", "", "", status_of(e)});
      }
    }
  }
}

void fig6b(const PresetContext& ctx) {
  write_header_comments(ctx.out, ctx.spec, {"fig6b: SR-z_DC region, N=4, m=6, omega=(0.8,0.2), beta=60"});
  CsvWriter csv(ctx.out, {"gamma0_db", "phi", "M", "K", "sr", "zdc", "pareto", "status"});
  const Physical ph = physical(ctx.base);
  const LinkBudget lb = LinkBudget::from_physical(1.0, ph.transmit_power, ph.path_loss, ph.circuit);
  const std::vector<double> omega = {0.8, 0.2};
  for (double g : {8.0, 12.0}) {
    try {
      const Region reg = region(4, 60, db_to_linear(g), 6.0, omega, lb.nu1, lb.nu2);
      for (const auto& pt : reg.points) {
        const bool front = std::any_of(reg.pareto.begin(), reg.pareto.end(), [&](const RegionPoint& q) {
          return q.phi == pt.phi && q.m_it == pt.m_it;
        });
        csv.row({fmt(g), fmt(pt.phi), fmt(pt.m_it), fmt(pt.k_eh), fmt(pt.sr), fmt(pt.zdc),
                 front ? "1" : "0", "ok"});
      }
    } catch (const std::exception& e) {
      csv.row({fmt(g), "", "", "", "", "", "", status_of(e)});
    }
  }
}

void fig7(const PresetContext& ctx) {
  write_header_comments(ctx.out, ctx.spec,
                        {"fig7: waveform gaps vs beta, m=4, omega=(0.6,0.4), K=N; EH noise off"});
  CsvWriter csv(ctx.out, {"beta", "N", "xi1_analytic", "xi2_analytic", "xi1_sim", "xi2_sim", "xi1_stderr",
                          "xi2_stderr", "status"});
  for (int beta = 10; beta <= 100; beta += 10) {
    for (int n = 1; n <= 3; ++n) {
      const Point p = preset_point(ctx.base, {{"N", fmt(n)}, {"beta", fmt(beta)}, {"m", "4"}, {"omega", "0.6,0.4"}});
      try {
        const GapRun r = gap_point(p, ctx.spec.seed, ctx.spec.workers, true);
        csv.row({fmt(beta), fmt(n), fmt(r.analytic.xi1), fmt(r.analytic.xi2), fmt(r.xi1_sim->value),
                 fmt(r.xi2_sim->value), fmt(r.xi1_sim->std_error), fmt(r.xi2_sim->std_error), "ok"});
      } catch (const std::exception& e) {
        csv.row({fmt(beta), fmt(n), "", "", "", "", "", "", status_of(e)});
      }
    }
  }
}

const std::map<std::string, std::function<void(const PresetContext&)>>& presets() {
  static const std::map<std::string, std::function<void(const PresetContext&)>> table = {
      {"fig3", fig3}, {"fig4", fig4}, {"fig5", fig5}, {"fig6a", fig6a}, {"fig6b", fig6b}, {"fig7", fig7}};
  return table;
}

void run_preset(const ExperimentSpec& spec, std::ostream& out) {
  const auto it = presets().find(spec.figure);
  if (it == presets().end()) {
    throw ConfigError("unknown figure '" + spec.figure + "' (expected fig3, fig4, fig5, fig6a, fig6b or fig7)");
  }
  static const std::vector<std::string> overridable = {"k2", "k4", "r_ant", "pt_dbm", "r", "a", "bits", "frames"};
  std::map<std::string, std::string> base;
  for (const auto& [key, cv] : spec.values) {
    if (std::find(overridable.begin(), overridable.end(), key) == overridable.end()) {
      throw ConfigError(cv.origin + ": key '" + key + "' is fixed by preset " + spec.figure);
    }
    const auto alts = alternatives(key, cv);
    if (alts.size() != 1) {
      throw ConfigError(cv.origin + ": presets take a single value for '" + key + "'");
    }
    base[key] = alts.front();
  }
  const Point p(base);
  try {
    physical(p);
    p.count("bits");
    p.count("frames");
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid preset override: ") + e.what());
  }
  it->second(PresetContext{spec, p, out});
}

}  // namespace

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::BerAnalytic: return "ber-analytic";
    case Command::BerSim: return "ber-sim";
    case Command::ZdcAnalytic: return "zdc-analytic";
    case Command::ZdcSim: return "zdc-sim";
    case Command::PhiOpt: return "phi-opt";
    case Command::Region: return "region";
    case Command::Gap: return "gap";
    case Command::ReproduceFigure: return "reproduce-figure";
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (auto c : {Command::BerAnalytic, Command::BerSim, Command::ZdcAnalytic, Command::ZdcSim, Command::PhiOpt,
                 Command::Region, Command::Gap, Command::ReproduceFigure}) {
    if (to_string(c) == name) {
      return c;
    }
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& info : key_table()) {
      k.push_back(info.name);
    }
    return k;
  }();
  return keys;
}

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = {"fig3", "fig4", "fig5", "fig6a", "fig6b", "fig7"};
  return names;
}

void parse_config_text(std::string_view text, std::string_view source, ConfigMap& into) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('\n', start), text.size());
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) {
        break;
      }
      continue;
    }
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      key_info(key);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
    if (value.empty()) {
      throw ConfigError(where + ": empty value for key '" + key + "'");
    }
    into[key] = ConfigValue{value, where};
    if (end == text.size()) {
      break;
    }
  }
}

void read_config_file(const std::string& path, ConfigMap& into) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  parse_config_text(buf.str(), path, into);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvVar)) {
    if (const auto v = to_integer(env); v && *v >= 0) {
      return static_cast<std::uint64_t>(*v);
    }
    throw ConfigError(std::string(kSeedEnvVar) + ": expected a non-negative integer, got '" + env + "'");
  }
  return 1;
}

void run(const ExperimentSpec& spec, std::ostream& out) {
  for (const auto& [key, cv] : spec.values) {
    key_info(key);
  }
  if (spec.command == Command::ReproduceFigure) {
    run_preset(spec, out);
    return;
  }

  const CommandInfo& info = command_info(spec.command);
  for (const auto& key : info.required) {
    if (!spec.values.count(key)) {
      throw ConfigError("missing required key '" + key + "' for command " + std::string(to_string(spec.command)));
    }
  }
  const bool needs_phi = (spec.command == Command::BerAnalytic) ||
                         ((spec.command == Command::BerSim || spec.command == Command::ZdcAnalytic ||
                           spec.command == Command::ZdcSim) &&
                          (!spec.values.count("waveform") ||
                           spec.values.at("waveform").text.find("srdcsk") != std::string::npos));
  if (needs_phi && !spec.values.count("phi")) {
    throw ConfigError("missing required key 'phi' for command " + std::string(to_string(spec.command)));
  }
  const std::vector<Point> points = expand(spec.values);

  std::vector<std::string> notes;
  if (spec.command == Command::BerSim) {
    notes.emplace_back(kNoiseNote);
  }
  write_header_comments(out, spec, notes);
  std::vector<std::string> header = info.echo;
  header.insert(header.end(), info.outputs.begin(), info.outputs.end());
  CsvWriter csv(out, header);

  const std::size_t n_out = info.outputs.size();
  for (const auto& p : points) {
    std::vector<std::string> echo;
    for (const auto& key : info.echo) {
      echo.push_back(p.text(key));
    }
    auto emit = [&](std::vector<std::string> outputs) {
      std::vector<std::string> row = echo;
      row.insert(row.end(), outputs.begin(), outputs.end());
      csv.row(row);
    };
    auto fail = [&](const std::exception& e) {
      std::vector<std::string> outputs(n_out - 1);
      outputs.push_back(status_of(e));
      emit(outputs);
    };
    try {
      switch (spec.command) {
        case Command::BerAnalytic:
          emit(ber_analytic_rows(p).front());
          break;
        case Command::BerSim: {
          const BerRun r = ber_sim_point(p, spec.seed, spec.workers);
          auto f = estimate_fields(r.sim);
          f.push_back(fmt(r.analytic));
          f.push_back("ok");
          emit(f);
          break;
        }
        case Command::ZdcAnalytic: {
          const Physical ph = physical(p);
          const WaveformSpec w = waveform_of(p, ph.transmit_power);
          const ChannelFactors f = factors_of(p);
          const LinkBudget lb = LinkBudget::from_physical(1.0, ph.transmit_power, ph.path_loss, ph.circuit);
          emit({fmt(f.upsilon1), fmt(f.upsilon2), fmt(lb.nu1), fmt(lb.nu2),
                fmt(zdc_analytic_for(w, p.integer("K"), lb, f)), "ok"});
          break;
        }
        case Command::ZdcSim: {
          const ZdcRun r = zdc_sim_point(p, spec.seed, spec.workers);
          auto f = estimate_fields(r.sim);
          f.push_back(fmt(r.analytic));
          f.push_back("ok");
          emit(f);
          break;
        }
        case Command::PhiOpt: {
          const PhiOptimum opt = phi_opt(p.integer("beta"), db_to_linear(p.real("gamma0_db")));
          emit({fmt(opt.real), fmt(opt.admissible), fmt(opt.nearest), "ok"});
          break;
        }
        case Command::Region: {
          const Physical ph = physical(p);
          const LinkBudget lb = LinkBudget::from_physical(1.0, ph.transmit_power, ph.path_loss, ph.circuit);
          const auto g = gains_of(p);
          const Region reg = region(p.integer("N"), p.integer("beta"), db_to_linear(p.real("gamma0_db")),
                                    p.real("m"), g, lb.nu1, lb.nu2);
          for (const auto& pt : reg.points) {
            const bool front = std::any_of(reg.pareto.begin(), reg.pareto.end(), [&](const RegionPoint& q) {
              return q.phi == pt.phi && q.m_it == pt.m_it;
            });
            emit({fmt(pt.phi), fmt(pt.m_it), fmt(pt.k_eh), fmt(pt.sr), fmt(pt.zdc), front ? "1" : "0", "ok"});
          }
          break;
        }
        case Command::Gap: {
          const bool sim = p.has("frames");
          const GapRun r = gap_point(p, spec.seed, spec.workers, sim);
          std::vector<std::string> f = {fmt(r.zdc_um), fmt(r.zdc_opt), fmt(r.zdc_pt), fmt(r.analytic.xi1),
                                        fmt(r.analytic.xi2)};
          if (sim) {
            f.insert(f.end(), {fmt(r.xi1_sim->value), fmt(r.xi1_sim->std_error), fmt(r.xi2_sim->value),
                               fmt(r.xi2_sim->std_error)});
          } else {
            f.insert(f.end(), {"", "", "", ""});
          }
          f.push_back("ok");
          emit(f);
          break;
        }
        case Command::ReproduceFigure:
          break;
      }
    } catch (const std::exception& e) {
      fail(e);
    }
  }
}

}  // namespace chaoswipt

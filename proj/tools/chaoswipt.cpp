#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <utility>
#include <sstream>

#include "chaoswipt/experiment.hpp"

namespace {

std::string flag_for(const std::string& key) {
  std::string flag = "--";
  for (char c : key) {
    flag += c == '_' ? '-' : c;
  }
  return flag;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace chaoswipt;

  CLI::App app{"Chaotic SWIPT simulator and analytic calculator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string output_path;
  std::optional<std::uint64_t> seed;
  bool no_timestamp = false;
  int workers = 0;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("-o,--output", output_path, "CSV output file (default: stdout)");
  app.add_option("--seed", seed, std::string("master seed (default: $") + kSeedEnvVar + " or 1)");
  app.add_flag("--no-timestamp", no_timestamp, "omit the generated-at comment line");
  app.add_option("--workers", workers, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  // Each key gets its own flag; values stay raw text so sweep syntax passes through.
  std::map<std::string, std::string> flag_values;
  for (const auto& key : known_keys()) {
    app.add_option(flag_for(key), flag_values[key], "sweep value(s) for " + key);
  }

  std::map<std::string, CLI::App*> subs;
  const std::pair<Command, const char*> commands[] = {
      {Command::BerAnalytic, "closed-form BER (AWGN, or Nakagami when m is set)"},
      {Command::BerSim, "Monte Carlo BER"},
      {Command::ZdcAnalytic, "closed-form harvested DC"},
      {Command::ZdcSim, "Monte Carlo harvested DC"},
      {Command::PhiOpt, "optimal reference length for beta and gamma0"},
      {Command::Region, "SR / harvested-DC trade-off over antenna splits"},
      {Command::Gap, "harvested-DC gaps between waveform designs"},
      {Command::ReproduceFigure, "run a fixed figure preset"},
  };
  for (const auto& [c, help] : commands) {
    const std::string name(to_string(c));
    subs[name] = app.add_subcommand(name, help);
  }
  std::string figure;
  subs["reproduce-figure"]->add_option("figure", figure, "fig3, fig4, fig5, fig6a, fig6b or fig7")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    ExperimentSpec spec;
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) {
        spec.command = parse_command(name);
      }
    }
    spec.figure = figure;
    if (!config_path.empty()) {
      read_config_file(config_path, spec.values);
    }
    for (const auto& key : known_keys()) {
      if (app.count(flag_for(key)) > 0) {
        spec.values[key] = ConfigValue{flag_values[key], flag_for(key)};
      }
    }
    spec.seed = seed ? *seed : default_seed();
    spec.timestamp = !no_timestamp;
    spec.workers = workers;

    std::ostringstream csv;
    run(spec, csv);
    if (output_path.empty()) {
      std::cout << csv.str();
    } else {
      std::ofstream out(output_path, std::ios::binary);
      if (!out || !(out << csv.str())) {
        std::cerr << "chaoswipt: cannot write '" << output_path << "'\n";
        return 3;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "chaoswipt: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "chaoswipt: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

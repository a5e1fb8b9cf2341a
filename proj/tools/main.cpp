// qtoa: batch evaluation of arrival-time and oscillation observables.
//
// Every subcommand reads an optional config file, lays the command-line
// flags over it, runs the scenario and writes CSV/JSON curves plus a short
// metrics summary to stdout.  Exit codes: 0 success, 1 bad configuration,
// 2 numeric failure, 3 regime violation in strict mode.

#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "qtoa/errors.hpp"
#include "qtoa/scenario.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string outdir = ".";
  std::map<std::string, std::string> overrides;
};

// Registers an option that lands in the flat config key `key` when given.
void overlay(CLI::App* cmd, CommonArgs& args, const std::string& flag, const std::string& key,
             const std::string& help) {
  cmd->add_option_function<std::string>(
         flag, [&args, key](const std::string& v) { args.overrides[key] = v; }, help)
      ->type_name("TEXT");
}

void add_common(CLI::App* cmd, CommonArgs& args, const std::string& mode) {
  cmd->callback([&args, mode] { args.overrides["run.mode"] = mode; });
  cmd->add_option("-c,--config", args.config, "config file (key=value sections or JSON)");
  cmd->add_option("-o,--out", args.outdir, "output directory");
  overlay(cmd, args, "--format", "run.format", "csv, json or both");
  overlay(cmd, args, "--prefix", "run.prefix", "output file stem");
  overlay(cmd, args, "--rel-tol", "run.rel_tol", "engine tolerance");
  cmd->add_flag_callback(
      "--strict", [&args] { args.overrides["run.strict"] = "true"; },
      "abort on regime violations instead of flagging");
}

int run(const CommonArgs& args) {
  const qtoa::ScenarioConfig cfg =
      args.config.empty() ? qtoa::parse_config_text("", args.overrides)
                          : qtoa::parse_config_file(args.config, args.overrides);
  const qtoa::RunOutputs out = qtoa::run_scenario(cfg, args.outdir);
  for (const auto& f : out.files) std::printf("wrote %s\n", f.c_str());
  for (const auto& f : out.flags) std::printf("flag: %s\n", f.c_str());
  for (const auto& [name, value] : out.metrics)
    std::printf("metric %s = %.17g\n", name.c_str(), value);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arrival-time measurement and oscillation curve calculator"};
  app.require_subcommand(1);

  CommonArgs args;

  CLI::App* curve = app.add_subcommand("curve", "detection probability vs distance");
  add_common(curve, args, "curve");
  overlay(curve, args, "--path", "run.path", "numeric, closed-general or closed-simplified");
  overlay(curve, args, "--l-min", "geometry.L_min", "start of the distance grid");
  overlay(curve, args, "--l-max", "geometry.L_max", "end of the distance grid");
  overlay(curve, args, "--span", "geometry.span_wavelengths",
          "grid length in oscillation wavelengths (alternative to --l-max)");
  overlay(curve, args, "--points", "geometry.L_points", "grid size");
  overlay(curve, args, "--smear-delta", "run.smear_delta", "position smearing width");
  overlay(curve, args, "--smear-sp", "run.smear_sp", "momentum smearing width");

  CLI::App* toa = app.add_subcommand("toa", "arrival-time density at a detector");
  add_common(toa, args, "toa");
  overlay(toa, args, "--mass", "toa.mass", "particle mass");
  overlay(toa, args, "--packet-width", "toa.a", "spatial packet width");
  overlay(toa, args, "--distance", "toa.L", "source-detector distance");
  overlay(toa, args, "--pbar1", "toa.pbar1", "first packet momentum");
  overlay(toa, args, "--pbar2", "toa.pbar2", "second packet momentum (two-packet state)");
  overlay(toa, args, "--t-lo", "toa.t_lo", "window start (default: auto)");
  overlay(toa, args, "--t-hi", "toa.t_hi", "window end (default: auto)");
  overlay(toa, args, "--points", "toa.points", "time grid size");

  CLI::App* wavelength =
      app.add_subcommand("wavelength", "oscillation wavelength vs energy, three models");
  add_common(wavelength, args, "wavelength");
  overlay(wavelength, args, "--eth", "wavelength.eth",
          "threshold energy; rescales the x axis from E/eth to E");
  overlay(wavelength, args, "--emax-ratio", "wavelength.emax_ratio", "top of the energy grid");
  overlay(wavelength, args, "--points", "wavelength.points", "grid size");

  CLI::App* compare =
      app.add_subcommand("compare", "standard vs threshold-shifted event distributions");
  add_common(compare, args, "compare");
  overlay(compare, args, "--alpha", "compare.alpha", "phase scale of the event model");
  overlay(compare, args, "--x-lo", "compare.x_lo", "start of the E/eth grid");
  overlay(compare, args, "--x-hi", "compare.x_hi", "end of the E/eth grid");
  overlay(compare, args, "--points", "compare.points", "grid size");

  CLI::App* mixed = app.add_subcommand("mixed", "detection curve of a mixed initial state");
  add_common(mixed, args, "mixed");

  CLI::App* channels =
      app.add_subcommand("channels", "combined curve over weighted detection channels");
  add_common(channels, args, "channels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    return run(args);
  } catch (const qtoa::RegimeViolation& e) {
    std::fprintf(stderr, "regime violation: %s\n", e.what());
    return 3;
  } catch (const qtoa::NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 2;
  } catch (const qtoa::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

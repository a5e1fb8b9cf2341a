#pragma once

#include <map>
#include <string>
#include <vector>

#include "qtoa/analysis.hpp"
#include "qtoa/oscillation.hpp"

namespace qtoa {

// A fully described run: what to compute, with which physics inputs, and how
// to write it out.  Parsed from a config file (INI-style sections or a JSON
// object with the same section/key layout); every physical quantity carries
// an explicit unit in the file and is stored here in natural units.
struct ScenarioConfig {
  // [run]
  std::string mode = "curve";  // curve | toa | wavelength | compare | mixed | channels
  ProbabilityPath path = ProbabilityPath::numeric;
  std::string format = "csv";  // csv | json | both
  std::string prefix;          // output file stem, defaults to the mode
  bool strict = false;         // abort on regime violations instead of flagging
  bool normalized_output = true;
  double smear_delta = 0;  // source-position resolution, 1/eV
  double smear_sp = 0;     // momentum-selection resolution, eV

  // [spectrum] masses or energies (+ shared momentum), optional widths
  std::vector<double> masses;
  std::vector<double> gammas;
  double momentum = 0;

  // [mixing] rotation angle (2 flavors) or identity dimension
  bool has_angle = false;
  double mixing_angle = 0;
  int identity_dim = 0;

  // [state]
  double sigma = 0;
  int production_flavor = 0;

  // [channel], [channel.<tag>]
  std::vector<WeightedChannel> channels;

  // [geometry] explicit L_max or a span in oscillation wavelengths
  double L_min = 0;
  double L_max = 0;
  double span_wavelengths = 0;
  int L_points = 181;
  double horizon = std::numeric_limits<double>::infinity();

  // [wavelength]
  double emax_ratio = 1e6;
  int wavelength_points = 1000;
  double eth = 0;  // > 0 rescales the energy axis from E/eth to absolute E

  // [compare]
  ComparisonSpec comparison;

  // [toa]
  double toa_mass = 0, toa_a = 0, toa_L = 0, toa_p1 = 0, toa_p2 = 0;
  double toa_t_lo = 0, toa_t_hi = 0;  // 0, 0 = auto window around the arrivals
  int toa_points = 4096;
  bool toa_two_packet = false;

  // [mixed]
  MixedInitialState mixed;

  EngineOptions engine;
};

// Parses and validates.  Collects every validation problem it can find and
// throws a single ValidationError listing all of them (ParseError for
// malformed syntax).  `overrides` maps dotted keys ("compare.alpha") onto
// replacement values, applied after the text is read — how command-line
// flags are laid over a config file.
ScenarioConfig parse_config_text(const std::string& text,
                                 const std::map<std::string, std::string>& overrides = {});
ScenarioConfig parse_config_file(const std::string& path,
                                 const std::map<std::string, std::string>& overrides = {});

struct RunOutputs {
  std::vector<std::string> files;
  std::vector<std::string> flags;
  std::map<std::string, double> metrics;  // mode-specific scalars (d12, norms, ...)
};

// Executes the scenario, writing outputs under outdir (created on demand).
// Deterministic: repeated runs produce byte-identical files for any thread
// count.
RunOutputs run_scenario(const ScenarioConfig& cfg, const std::string& outdir);

// Builds the physics objects a probability-curve scenario describes.
MassSpectrum scenario_spectrum(const ScenarioConfig& cfg);
MixingMatrix scenario_mixing(const ScenarioConfig& cfg);
WavePacketState scenario_state(const ScenarioConfig& cfg);
std::vector<double> scenario_distance_grid(const ScenarioConfig& cfg);

}  // namespace qtoa

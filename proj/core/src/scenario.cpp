#include "qtoa/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qtoa/arrival.hpp"
#include "qtoa/errors.hpp"
#include "qtoa/sweep.hpp"
#include "qtoa/units.hpp"

namespace qtoa {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

using FlatMap = std::map<std::string, std::string>;

FlatMap parse_ini(const std::string& text) {
  FlatMap out;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError(lineno, "empty section name");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (out.count(full)) throw ParseError(lineno, "duplicate key '" + full + "'");
    out[full] = value;
  }
  return out;
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw ParseError(0, "unsupported JSON scalar");
}

void flatten_json(const nlohmann::json& j, const std::string& prefix, FlatMap& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
    return;
  }
  if (j.is_array()) {
    const bool scalars = std::all_of(j.begin(), j.end(),
                                     [](const nlohmann::json& e) { return !e.is_structured(); });
    if (scalars) {
      std::string joined;
      for (const auto& e : j) {
        if (!joined.empty()) joined += ", ";
        joined += json_scalar(e);
      }
      out[prefix] = joined;
      return;
    }
    // Array of objects: mirror repeated INI sections name, name.2, name.3...
    for (size_t i = 0; i < j.size(); ++i)
      flatten_json(j[i], i == 0 ? prefix : prefix + "." + std::to_string(i + 1), out);
    return;
  }
  out[prefix] = json_scalar(j);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

// Typed key lookup that records every problem instead of stopping at the
// first, so a bad config reports everything wrong with it at once.
struct Collector {
  explicit Collector(const FlatMap& kv) : kv(kv) {}
  const FlatMap& kv;
  std::vector<std::string> errors;
  std::set<std::string> used;

  void fail(const std::string& key, const std::string& msg) { errors.push_back(key + ": " + msg); }

  std::optional<std::string> raw(const std::string& key) {
    used.insert(key);
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  }

  bool has(const std::string& key) const { return kv.count(key) != 0; }

  double quantity(const std::string& key, Dimension dim, double fallback, bool required = false) {
    const auto v = raw(key);
    if (!v) {
      if (required) fail(key, "required");
      return fallback;
    }
    try {
      return parse_quantity(*v, dim);
    } catch (const ConfigError& e) {
      fail(key, e.what());
      return fallback;
    }
  }

  std::vector<double> quantity_list(const std::string& key, Dimension dim,
                                    bool required = false) {
    const auto v = raw(key);
    if (!v) {
      if (required) fail(key, "required");
      return {};
    }
    std::vector<double> out;
    for (const auto& item : split_list(*v)) {
      try {
        out.push_back(parse_quantity(item, dim));
      } catch (const ConfigError& e) {
        fail(key, e.what());
      }
    }
    if (out.empty() && required) fail(key, "empty list");
    return out;
  }

  int integer(const std::string& key, int fallback) {
    const auto v = raw(key);
    if (!v) return fallback;
    try {
      size_t pos = 0;
      const int n = std::stoi(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("trailing characters");
      return n;
    } catch (const std::exception&) {
      fail(key, "not an integer: '" + *v + "'");
      return fallback;
    }
  }

  bool boolean(const std::string& key, bool fallback) {
    const auto v = raw(key);
    if (!v) return fallback;
    std::string s = *v;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    fail(key, "not a boolean: '" + *v + "'");
    return fallback;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const auto v = raw(key);
    return v ? *v : fallback;
  }
};

const std::set<std::string>& known_modes() {
  static const std::set<std::string> m = {"curve", "toa", "wavelength",
                                          "compare", "mixed", "channels"};
  return m;
}

ProbabilityPath parse_path(const std::string& name, Collector& c) {
  if (name == "numeric") return ProbabilityPath::numeric;
  if (name == "closed-general") return ProbabilityPath::closed_general;
  if (name == "closed-simplified") return ProbabilityPath::closed_simplified;
  c.fail("run.path", "must be numeric, closed-general or closed-simplified");
  return ProbabilityPath::numeric;
}

const char* path_name(ProbabilityPath p) {
  switch (p) {
    case ProbabilityPath::numeric: return "numeric";
    case ProbabilityPath::closed_general: return "closed-general";
    case ProbabilityPath::closed_simplified: return "closed-simplified";
  }
  return "?";
}

std::vector<std::string> channel_sections(const FlatMap& kv) {
  std::set<std::string> sections;
  for (const auto& [key, value] : kv) {
    if (key.rfind("channel", 0) != 0) continue;
    const size_t dot = key.find('.');
    if (dot == std::string::npos) continue;
    const std::string head = key.substr(0, dot);
    if (head == "channel")
      sections.insert("channel");
    else
      continue;
    // channel.2.epsilon_th style: the section is channel.2
    const size_t dot2 = key.find('.', dot + 1);
    if (dot2 != std::string::npos) sections.insert(key.substr(0, dot2));
  }
  std::vector<std::string> out(sections.begin(), sections.end());
  // "channel" must come before "channel.N"; lexicographic order does that.
  return out;
}

DetectionChannel read_channel(Collector& c, const std::string& section, double* weight) {
  DetectionChannel ch;
  ch.epsilon_th = c.quantity(section + ".epsilon_th", Dimension::energy, 0.0, true);
  ch.product_masses = c.quantity_list(section + ".product_masses", Dimension::energy, true);
  ch.delta = c.quantity(section + ".delta", Dimension::length, 0.0, true);
  ch.tau_dec = c.quantity(section + ".tau_dec", Dimension::time, 0.0, true);
  ch.detection_flavor = c.integer(section + ".detection_flavor", 0);
  *weight = c.quantity(section + ".weight", Dimension::dimensionless, 1.0);
  return ch;
}

ScenarioConfig build_config(const FlatMap& kv) {
  Collector c(kv);
  ScenarioConfig cfg;

  cfg.mode = c.text("run.mode", "curve");
  if (!known_modes().count(cfg.mode)) c.fail("run.mode", "unknown mode '" + cfg.mode + "'");
  cfg.path = parse_path(c.text("run.path", "numeric"), c);
  cfg.format = c.text("run.format", "csv");
  if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both")
    c.fail("run.format", "must be csv, json or both");
  cfg.prefix = c.text("run.prefix", "");
  cfg.strict = c.boolean("run.strict", false);
  cfg.normalized_output = c.boolean("run.normalized", true);
  cfg.smear_delta = c.quantity("run.smear_delta", Dimension::length, 0.0);
  cfg.smear_sp = c.quantity("run.smear_sp", Dimension::energy, 0.0);
  cfg.engine.rel_tol = c.quantity("run.rel_tol", Dimension::dimensionless, 1e-6);
  if (!(cfg.engine.rel_tol > 0 && cfg.engine.rel_tol < 1))
    c.fail("run.rel_tol", "must lie in (0, 1)");
  if (cfg.smear_delta < 0) c.fail("run.smear_delta", "must be >= 0");
  if (cfg.smear_sp < 0) c.fail("run.smear_sp", "must be >= 0");

  const bool needs_physics =
      cfg.mode == "curve" || cfg.mode == "mixed" || cfg.mode == "channels";

  // [spectrum]
  const bool has_masses = c.has("spectrum.masses");
  const bool has_energies = c.has("spectrum.energies");
  cfg.momentum = c.quantity("spectrum.momentum", Dimension::energy, 0.0, needs_physics);
  if (has_masses && has_energies)
    c.fail("spectrum", "give either masses or energies, not both");
  if (needs_physics && !has_masses && !has_energies)
    c.fail("spectrum", "needs a masses or energies list");
  if (has_masses) {
    cfg.masses = c.quantity_list("spectrum.masses", Dimension::energy, true);
    for (double m : cfg.masses)
      if (!(m >= 0)) c.fail("spectrum.masses", "masses must be >= 0");
  } else if (has_energies) {
    const std::vector<double> energies =
        c.quantity_list("spectrum.energies", Dimension::energy, true);
    for (double E : energies) {
      if (!(E > cfg.momentum)) {
        c.fail("spectrum.energies", "every energy must exceed the shared momentum");
        break;
      }
    }
    if (cfg.momentum > 0)
      for (double E : energies)
        if (E > cfg.momentum)
          cfg.masses.push_back(std::sqrt((E - cfg.momentum) * (E + cfg.momentum)));
  }
  cfg.gammas = c.quantity_list("spectrum.gammas", Dimension::energy);
  if (!cfg.gammas.empty() && cfg.gammas.size() != cfg.masses.size())
    c.fail("spectrum.gammas", "length must match the masses list");
  if (needs_physics && !(cfg.momentum > 0)) c.fail("spectrum.momentum", "must be > 0");

  // [mixing]
  cfg.has_angle = c.has("mixing.angle");
  cfg.mixing_angle = c.quantity("mixing.angle", Dimension::dimensionless, 0.0);
  cfg.identity_dim = c.integer("mixing.identity", 0);
  if (needs_physics) {
    if (cfg.has_angle && cfg.identity_dim > 0)
      c.fail("mixing", "give either angle or identity, not both");
    if (!cfg.has_angle && cfg.identity_dim <= 0)
      c.fail("mixing", "needs an angle (2 flavors) or an identity dimension");
    if (cfg.has_angle && cfg.masses.size() != 2 && !cfg.masses.empty())
      c.fail("mixing.angle", "rotation mixing needs exactly two mass eigenstates");
    if (cfg.identity_dim > 0 && !cfg.masses.empty() &&
        cfg.identity_dim != static_cast<int>(cfg.masses.size()))
      c.fail("mixing.identity", "dimension must match the spectrum");
  }

  // [state]
  cfg.sigma = c.quantity("state.sigma", Dimension::length, 0.0, needs_physics);
  if (needs_physics && !(cfg.sigma > 0)) c.fail("state.sigma", "must be > 0");
  cfg.production_flavor = c.integer("state.production_flavor", 0);

  // [channel] sections
  for (const std::string& section : channel_sections(kv)) {
    double weight = 1.0;
    DetectionChannel ch = read_channel(c, section, &weight);
    if (!(weight > 0)) c.fail(section + ".weight", "must be > 0");
    cfg.channels.push_back({std::move(ch), weight});
  }
  if (needs_physics && cfg.channels.empty()) c.fail("channel", "needs at least one channel");
  if (needs_physics && cfg.mode != "channels" && cfg.channels.size() > 1)
    c.fail("channel", "mode '" + cfg.mode + "' uses exactly one channel");

  // [geometry]
  cfg.L_min = c.quantity("geometry.L_min", Dimension::length, 0.0, needs_physics);
  cfg.L_max = c.quantity("geometry.L_max", Dimension::length, 0.0);
  cfg.span_wavelengths = c.quantity("geometry.span_wavelengths", Dimension::dimensionless, 0.0);
  cfg.L_points = c.integer("geometry.L_points", 181);
  cfg.horizon = c.quantity("geometry.horizon", Dimension::time,
                           std::numeric_limits<double>::infinity());
  if (needs_physics) {
    if (!(cfg.L_min > 0)) c.fail("geometry.L_min", "must be > 0");
    const bool has_max = c.has("geometry.L_max");
    const bool has_span = c.has("geometry.span_wavelengths");
    if (has_max == has_span)
      c.fail("geometry", "give exactly one of L_max or span_wavelengths");
    if (has_max && !(cfg.L_max > cfg.L_min)) c.fail("geometry.L_max", "must exceed L_min");
    if (has_span && !(cfg.span_wavelengths > 0))
      c.fail("geometry.span_wavelengths", "must be > 0");
    if (cfg.L_points < 2) c.fail("geometry.L_points", "must be >= 2");
  }

  // [wavelength]
  cfg.emax_ratio = c.quantity("wavelength.emax_ratio", Dimension::dimensionless, 1e6);
  cfg.wavelength_points = c.integer("wavelength.points", 1000);
  cfg.eth = c.quantity("wavelength.eth", Dimension::energy, 0.0);
  if (cfg.mode == "wavelength") {
    if (!(cfg.emax_ratio > 1)) c.fail("wavelength.emax_ratio", "must be > 1");
    if (cfg.wavelength_points < 2) c.fail("wavelength.points", "must be >= 2");
    if (c.has("wavelength.eth") && !(cfg.eth > 0)) c.fail("wavelength.eth", "must be > 0");
  }

  // [compare]
  cfg.comparison.alpha =
      c.quantity("compare.alpha", Dimension::dimensionless, 0.0, cfg.mode == "compare");
  cfg.comparison.x_lo = c.quantity("compare.x_lo", Dimension::dimensionless, 1.0);
  cfg.comparison.x_hi = c.quantity("compare.x_hi", Dimension::dimensionless, 10.0);
  cfg.comparison.grid_points = c.integer("compare.points", 2001);
  if (cfg.mode == "compare") {
    try {
      validate_comparison(cfg.comparison);
    } catch (const ConfigError& e) {
      c.fail("compare", e.what());
    }
  }

  // [toa]
  cfg.toa_mass = c.quantity("toa.mass", Dimension::energy, 0.0, cfg.mode == "toa");
  cfg.toa_a = c.quantity("toa.a", Dimension::length, 0.0, cfg.mode == "toa");
  cfg.toa_L = c.quantity("toa.L", Dimension::length, 0.0, cfg.mode == "toa");
  cfg.toa_p1 = c.quantity("toa.pbar1", Dimension::energy, 0.0, cfg.mode == "toa");
  cfg.toa_two_packet = c.has("toa.pbar2");
  cfg.toa_p2 = c.quantity("toa.pbar2", Dimension::energy, 0.0);
  cfg.toa_t_lo = c.quantity("toa.t_lo", Dimension::time, 0.0);
  cfg.toa_t_hi = c.quantity("toa.t_hi", Dimension::time, 0.0);
  cfg.toa_points = c.integer("toa.points", 4096);
  if (cfg.mode == "toa") {
    if (!(cfg.toa_mass > 0)) c.fail("toa.mass", "must be > 0");
    if (!(cfg.toa_a > 0)) c.fail("toa.a", "must be > 0");
    if (!(cfg.toa_L > 0)) c.fail("toa.L", "must be > 0");
    if (!(cfg.toa_p1 > 0)) c.fail("toa.pbar1", "must be > 0");
    if (cfg.toa_two_packet && !(cfg.toa_p2 > 0)) c.fail("toa.pbar2", "must be > 0");
    if (cfg.toa_points < 16) c.fail("toa.points", "must be >= 16");
  }

  // [mixed]
  if (cfg.mode == "mixed" || c.has("mixed.weights")) {
    const std::vector<double> shifts =
        c.quantity_list("mixed.shifts", Dimension::length, cfg.mode == "mixed");
    const std::vector<double> momenta =
        c.quantity_list("mixed.momenta", Dimension::energy, cfg.mode == "mixed");
    const std::vector<double> weights =
        c.quantity_list("mixed.weights", Dimension::dimensionless, cfg.mode == "mixed");
    if (shifts.size() != momenta.size() || momenta.size() != weights.size())
      c.fail("mixed", "shifts, momenta and weights must have equal lengths");
    else
      for (size_t i = 0; i < shifts.size(); ++i)
        cfg.mixed.components.push_back({shifts[i], momenta[i], weights[i]});
    cfg.mixed.sigma = cfg.sigma;
  }

  // Reject unknown keys so typos do not silently fall back to defaults.
  for (const auto& [key, value] : kv)
    if (!c.used.count(key)) c.errors.push_back(key + ": unknown key");

  if (!c.errors.empty()) {
    std::string joined = "invalid config (" + std::to_string(c.errors.size()) + " problems)";
    for (const auto& e : c.errors) joined += "\n  - " + e;
    throw ValidationError("config", joined);
  }
  return cfg;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text,
                                 const std::map<std::string, std::string>& overrides) {
  const std::string body = trim(text);
  FlatMap kv;
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(0, std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(0, "top-level JSON value must be an object");
    flatten_json(j, "", kv);
  } else {
    kv = parse_ini(text);
  }
  for (const auto& [key, value] : overrides) kv[key] = value;
  return build_config(kv);
}

ScenarioConfig parse_config_file(const std::string& path,
                                 const std::map<std::string, std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides);
}

MassSpectrum scenario_spectrum(const ScenarioConfig& cfg) {
  return MassSpectrum::equal_momentum(cfg.masses, cfg.momentum, cfg.gammas);
}

MixingMatrix scenario_mixing(const ScenarioConfig& cfg) {
  return cfg.has_angle ? MixingMatrix::rotation2(cfg.mixing_angle)
                       : MixingMatrix::identity(cfg.identity_dim);
}

WavePacketState scenario_state(const ScenarioConfig& cfg) {
  return {scenario_spectrum(cfg), cfg.sigma, cfg.production_flavor, 0.0};
}

std::vector<double> scenario_distance_grid(const ScenarioConfig& cfg) {
  double L_max = cfg.L_max;
  if (cfg.span_wavelengths > 0) {
    const MassSpectrum spec = scenario_spectrum(cfg);
    const double eps = cfg.channels.empty() ? 0.0 : cfg.channels.front().channel.epsilon_th;
    double k = 0;
    for (int i = 0; i < spec.size(); ++i)
      for (int j = i + 1; j < spec.size(); ++j)
        k = std::max(k, std::fabs(oscillation_wavenumber(spec, i, j, eps)));
    if (!(k > 0))
      throw ValidationError("geometry.span_wavelengths",
                            "needs a non-degenerate spectrum to define a wavelength");
    L_max = cfg.L_min + cfg.span_wavelengths * 2 * std::numbers::pi / k;
  }
  return linspace(cfg.L_min, L_max, cfg.L_points);
}

namespace {

struct Writer {
  const ScenarioConfig& cfg;
  std::string base;
  RunOutputs& out;

  void emit(const std::vector<Curve>& curves) {
    if (cfg.format == "csv" || cfg.format == "both") {
      const std::string path = base + ".csv";
      write_csv(path, curves);
      out.files.push_back(path);
    }
    if (cfg.format == "json" || cfg.format == "both") {
      for (const auto& c : curves) {
        const std::string path = base + "_" + c.meta.model + ".json";
        write_json(path, c);
        out.files.push_back(path);
      }
    }
    for (const auto& c : curves)
      for (const auto& f : c.meta.flags)
        if (std::find(out.flags.begin(), out.flags.end(), f) == out.flags.end())
          out.flags.push_back(f);
  }
};

void append_probability_curves(const ScenarioConfig& cfg, Curve raw, std::vector<Curve>& curves) {
  curves.push_back(raw);
  if (cfg.smear_delta > 0 || cfg.smear_sp > 0)
    curves.push_back(sampling_smear(raw, cfg.smear_delta, cfg.smear_sp));
  if (cfg.normalized_output) curves.push_back(normalized(curves.back()));
}

void try_fit_metrics(const Curve& curve, RunOutputs& out) {
  try {
    const WavenumberFit fit = extract_wavenumber(curve);
    out.metrics["k_fit"] = fit.wavenumber;
    out.metrics["visibility"] = fit.visibility;
    out.metrics["fit_residual"] = fit.residual;
  } catch (const NumericError&) {
    // curves without a clear oscillation simply carry no fit metrics
  }
}

}  // namespace

RunOutputs run_scenario(const ScenarioConfig& cfg, const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  const std::string prefix = cfg.prefix.empty() ? cfg.mode : cfg.prefix;
  RunOutputs out;
  Writer writer{cfg, outdir + "/" + prefix, out};

  EngineOptions eng = cfg.engine;
  eng.enforce_regime = cfg.strict;

  if (cfg.mode == "wavelength") {
    WavelengthCurves wc =
        wavelength_curves(logspace(1.0, cfg.emax_ratio, cfg.wavelength_points));
    if (cfg.eth > 0)
      for (Curve* c : {&wc.standard, &wc.factor_two, &wc.threshold}) {
        for (double& x : c->x) x *= cfg.eth;
        c->meta.x_label = "E";
      }
    writer.emit({wc.standard, wc.factor_two, wc.threshold});
    return out;
  }

  if (cfg.mode == "compare") {
    const Curve p_std = event_distribution(EventModel::standard, cfg.comparison);
    const Curve p_thr = event_distribution(EventModel::threshold, cfg.comparison);
    out.metrics["d12"] = statistical_distance(p_std, p_thr);
    writer.emit({p_std, p_thr});
    return out;
  }

  if (cfg.mode == "toa") {
    TwoPacketSpec spec;
    spec.mass = cfg.toa_mass;
    spec.distance = cfg.toa_L;
    spec.a = cfg.toa_a;
    spec.p_bar1 = cfg.toa_p1;
    spec.p_bar2 = cfg.toa_two_packet ? cfg.toa_p2 : cfg.toa_p1;

    const MomentumWavefunction psi =
        cfg.toa_two_packet ? spec.state()
                           : MomentumWavefunction::gaussian(cfg.toa_a, cfg.toa_p1, cfg.toa_L);
    const double M = cfg.toa_mass;
    const double t1 = cfg.toa_L * M / cfg.toa_p1;
    const double t2 = cfg.toa_two_packet ? cfg.toa_L * M / cfg.toa_p2 : t1;
    const double width = cfg.toa_a * M / (2.0 * std::min(cfg.toa_p1, spec.p_bar2));
    double t_lo = cfg.toa_t_lo, t_hi = cfg.toa_t_hi;
    if (!(t_hi > t_lo)) {
      t_lo = std::min(t1, t2) - 8 * width;
      t_hi = std::max(t1, t2) + 8 * width;
    }

    Curve arrival;
    arrival.x = linspace(t_lo, t_hi, cfg.toa_points);
    arrival.y = parallel_map(arrival.x,
                             [&](double t) { return arrival_time_pdf(psi, M, t); });
    arrival.meta = {"t", "arrival_density", AxisKind::time, "arrival", {}};
    if (cfg.toa_two_packet && !spec.packets_resolved())
      arrival.meta.flags.push_back("packets-overlap");

    std::vector<Curve> curves = {arrival};
    if (cfg.toa_two_packet) {
      Curve model = arrival;
      model.meta.model = "two_packet_model";
      for (size_t i = 0; i < model.x.size(); ++i)
        model.y[i] = two_packet_arrival_pdf(spec, model.x[i]);
      curves.push_back(std::move(model));
      out.metrics["beat_frequency"] = spec.beat_frequency();
      out.metrics["classical_arrival"] = spec.classical_arrival();
    }
    out.metrics["window_probability"] =
        arrival_probability(psi, M, t_lo, t_hi, 1e-6, {t1, t2});
    out.metrics["no_detection"] = 1.0 - out.metrics["window_probability"];
    writer.emit(curves);
    return out;
  }

  // Probability-curve modes: curve, mixed, channels.
  const MassSpectrum spectrum = scenario_spectrum(cfg);
  const MixingMatrix mixing = scenario_mixing(cfg);
  const WavePacketState state = scenario_state(cfg);
  const std::vector<double> grid = scenario_distance_grid(cfg);

  if (cfg.mode == "curve") {
    const DetectionChannel& ch = cfg.channels.front().channel;
    Curve raw;
    raw.x = grid;
    raw.y = parallel_map(grid, [&](double L) {
      return detection_probability(state, mixing, ch, {L, cfg.horizon}, cfg.path, eng).value;
    });
    raw.meta = {"L", "detection_probability", AxisKind::length, path_name(cfg.path), {}};
    raw.meta.flags = regime_flags(state, mixing, ch, {grid.back(), cfg.horizon});
    std::vector<Curve> curves;
    append_probability_curves(cfg, raw, curves);
    try_fit_metrics(raw, out);
    writer.emit(curves);
    return out;
  }

  if (cfg.mode == "mixed") {
    Curve raw;
    raw.x = grid;
    MixedResult probe = mixed_state_probability(spectrum, cfg.mixed, mixing,
                                                cfg.production_flavor,
                                                cfg.channels.front().channel,
                                                {grid.back(), cfg.horizon}, cfg.path, eng);
    raw.y = parallel_map(grid, [&](double L) {
      return mixed_state_probability(spectrum, cfg.mixed, mixing, cfg.production_flavor,
                                     cfg.channels.front().channel, {L, cfg.horizon}, cfg.path,
                                     eng)
          .result.value;
    });
    raw.meta = {"L", "detection_probability", AxisKind::length,
                std::string(path_name(cfg.path)) + "-mixed", probe.result.flags};
    out.metrics["phase_spread"] = probe.phase_spread;
    std::vector<Curve> curves;
    append_probability_curves(cfg, raw, curves);
    try_fit_metrics(raw, out);
    writer.emit(curves);
    return out;
  }

  if (cfg.mode == "channels") {
    std::vector<Curve> curves;
    Curve combined;
    combined.x = grid;
    combined.y = parallel_map(grid, [&](double L) {
      return multi_channel_probability(state, mixing, cfg.channels, {L, cfg.horizon}, cfg.path,
                                       eng)
          .value;
    });
    combined.meta = {"L", "detection_probability", AxisKind::length, "combined", {}};
    for (const auto& wc : cfg.channels)
      for (const auto& f :
           regime_flags(state, mixing, wc.channel, {grid.back(), cfg.horizon}))
        if (std::find(combined.meta.flags.begin(), combined.meta.flags.end(), f) ==
            combined.meta.flags.end())
          combined.meta.flags.push_back(f);
    curves.push_back(combined);
    for (size_t k = 0; k < cfg.channels.size(); ++k) {
      Curve per;
      per.x = grid;
      per.y = parallel_map(grid, [&](double L) {
        return cfg.channels[k].weight *
               detection_probability(state, mixing, cfg.channels[k].channel, {L, cfg.horizon},
                                     cfg.path, eng)
                   .value;
      });
      per.meta = {"L", "detection_probability", AxisKind::length,
                  "channel" + std::to_string(k + 1), {}};
      curves.push_back(std::move(per));
    }
    if (cfg.normalized_output) curves.push_back(normalized(combined));
    try_fit_metrics(combined, out);
    writer.emit(curves);
    return out;
  }

  throw ValidationError("run.mode", "unhandled mode '" + cfg.mode + "'");
}

}  // namespace qtoa

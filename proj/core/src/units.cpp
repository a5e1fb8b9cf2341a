#include "qtoa/units.hpp"

#include <cctype>
#include <cstdlib>
#include <map>

#include "qtoa/errors.hpp"

namespace qtoa {

const char* dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::energy: return "energy";
    case Dimension::length: return "length";
    case Dimension::time: return "time";
    case Dimension::dimensionless: return "dimensionless";
  }
  return "?";
}

double meters_to_natural(double meters) { return meters / constants::hbarc_eV_m; }
double natural_to_meters(double inv_eV) { return inv_eV * constants::hbarc_eV_m; }
double seconds_to_natural(double seconds) { return seconds / constants::hbar_eV_s; }
double natural_to_seconds(double inv_eV) { return inv_eV * constants::hbar_eV_s; }
double kelvin_to_eV(double kelvin) { return kelvin * constants::boltzmann_eV_per_K; }
double eV_to_kelvin(double eV) { return eV / constants::boltzmann_eV_per_K; }

double to_si(double natural_value, Dimension dim) {
  switch (dim) {
    case Dimension::energy: return natural_value;
    case Dimension::length: return natural_to_meters(natural_value);
    case Dimension::time: return natural_to_seconds(natural_value);
    case Dimension::dimensionless: return natural_value;
  }
  return natural_value;
}

namespace {

struct UnitDef {
  Dimension dim;
  double to_natural;  // multiplicative factor into eV or 1/eV
};

const std::map<std::string, UnitDef>& unit_table() {
  using C = double;
  static const std::map<std::string, UnitDef> table = {
      {"meV", {Dimension::energy, 1e-3}},
      {"eV", {Dimension::energy, 1.0}},
      {"keV", {Dimension::energy, 1e3}},
      {"MeV", {Dimension::energy, 1e6}},
      {"GeV", {Dimension::energy, 1e9}},
      {"TeV", {Dimension::energy, 1e12}},
      {"K", {Dimension::energy, constants::boltzmann_eV_per_K}},
      {"m", {Dimension::length, C(1) / constants::hbarc_eV_m}},
      {"km", {Dimension::length, 1e3 / constants::hbarc_eV_m}},
      {"cm", {Dimension::length, 1e-2 / constants::hbarc_eV_m}},
      {"mm", {Dimension::length, 1e-3 / constants::hbarc_eV_m}},
      {"um", {Dimension::length, 1e-6 / constants::hbarc_eV_m}},
      {"nm", {Dimension::length, 1e-9 / constants::hbarc_eV_m}},
      {"pm", {Dimension::length, 1e-12 / constants::hbarc_eV_m}},
      {"fm", {Dimension::length, 1e-15 / constants::hbarc_eV_m}},
      {"s", {Dimension::time, C(1) / constants::hbar_eV_s}},
      {"ms", {Dimension::time, 1e-3 / constants::hbar_eV_s}},
      {"us", {Dimension::time, 1e-6 / constants::hbar_eV_s}},
      {"ns", {Dimension::time, 1e-9 / constants::hbar_eV_s}},
      {"ps", {Dimension::time, 1e-12 / constants::hbar_eV_s}},
      {"fs", {Dimension::time, 1e-15 / constants::hbar_eV_s}},
  };
  return table;
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

double parse_quantity(const std::string& text, Dimension expected) {
  const std::string s = trim(text);
  if (s.empty()) throw ValidationError("quantity", "empty value");

  const char* begin = s.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin)
    throw ValidationError("quantity", "no number in '" + s + "'");

  std::string unit = trim(std::string(end));
  if (unit.empty()) {
    if (expected != Dimension::dimensionless)
      throw ValidationError("quantity", "'" + s + "' is missing a unit (expected " +
                                            std::string(dimension_name(expected)) + ")");
    return value;
  }
  if (expected == Dimension::dimensionless)
    throw ValidationError("quantity", "'" + s + "' has a unit but a bare number was expected");

  // Inverse energy is already natural and passes for both length and time.
  if (unit == "eV^-1" || unit == "1/eV" || unit == "/eV") {
    if (expected == Dimension::length || expected == Dimension::time) return value;
    throw ValidationError("quantity", "'" + s + "' is an inverse energy, expected " +
                                          std::string(dimension_name(expected)));
  }

  auto it = unit_table().find(unit);
  if (it == unit_table().end())
    throw ValidationError("quantity", "unknown unit '" + unit + "' in '" + s + "'");
  if (it->second.dim != expected)
    throw ValidationError("quantity", "'" + s + "' has dimension " +
                                          std::string(dimension_name(it->second.dim)) +
                                          ", expected " + std::string(dimension_name(expected)));
  return value * it->second.to_natural;
}

}  // namespace qtoa

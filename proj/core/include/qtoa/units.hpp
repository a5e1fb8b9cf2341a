#pragma once

#include <string>

namespace qtoa {

// The library works in natural units (hbar = c = 1) with the electron-volt as
// the base scale: energies, momenta and masses in eV; lengths and times in
// 1/eV.  Conversions to and from SI happen only at the I/O boundary.
namespace constants {

inline constexpr double hbar_eV_s = 6.582119569e-16;          // eV s
inline constexpr double hbarc_MeV_fm = 197.3269804;           // MeV fm
inline constexpr double hbarc_eV_m = hbarc_MeV_fm * 1e-9;     // eV m
inline constexpr double boltzmann_eV_per_K = 8.617333262e-5;  // eV / K

}  // namespace constants

enum class Dimension { energy, length, time, dimensionless };

const char* dimension_name(Dimension dim);

// SI <-> natural-unit conversions.  Lengths and times map to inverse energy.
double meters_to_natural(double meters);
double natural_to_meters(double inv_eV);
double seconds_to_natural(double seconds);
double natural_to_seconds(double inv_eV);
double kelvin_to_eV(double kelvin);
double eV_to_kelvin(double eV);

// Natural-unit value -> conventional SI value for the dimension (eV, m or s).
double to_si(double natural_value, Dimension dim);

// Parses "<number> <unit>" (the space is optional) into a natural-unit value
// of the expected dimension.  Accepted units: energy eV/keV/MeV/GeV/meV and K
// (temperature as energy); length m and SI submultiples down to fm plus km;
// time s down to fs; "eV^-1" or "1/eV" for quantities already in natural
// units (valid as length or time); bare numbers only for dimensionless.
// Throws ValidationError when the unit is unknown or does not match
// `expected`.
double parse_quantity(const std::string& text, Dimension expected);

}  // namespace qtoa

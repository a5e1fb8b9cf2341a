#pragma once

#include <string>
#include <vector>

namespace qtoa {

enum class AxisKind { length, time, momentum, energy, dimensionless };

struct CurveMeta {
  std::string x_label = "x";
  std::string y_label = "y";
  AxisKind x_kind = AxisKind::dimensionless;
  std::string model;  // which evaluation produced y
  std::vector<std::string> flags;
};

// A sampled 1-d function plus provenance.  x must be finite and strictly
// increasing, y finite and the same length.
struct Curve {
  std::vector<double> x;
  std::vector<double> y;
  CurveMeta meta;
};

void validate_curve(const Curve& c);

// y rescaled so the Simpson integral over x equals 1.  Requires a uniform
// grid and a positive integral.
Curve normalized(const Curve& c);

// Multi-column CSV: header "x_label,model1,model2,...", one row per grid
// point, every float printed with 17 significant digits.  All curves must
// share the x grid exactly.
void write_csv(const std::string& path, const std::vector<Curve>& curves);

// One curve per file: {"meta": {...}, "x": [...], "y": [...], "flags": [...]}.
void write_json(const std::string& path, const Curve& curve);

std::vector<double> linspace(double lo, double hi, int n);
std::vector<double> logspace(double lo, double hi, int n);  // log-uniform, lo, hi > 0

}  // namespace qtoa

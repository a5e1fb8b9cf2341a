#include "qtoa/curve.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "qtoa/errors.hpp"
#include "qtoa/quadrature.hpp"

namespace qtoa {

namespace {
const char* axis_kind_name(AxisKind k) {
  switch (k) {
    case AxisKind::length: return "length";
    case AxisKind::time: return "time";
    case AxisKind::momentum: return "momentum";
    case AxisKind::energy: return "energy";
    case AxisKind::dimensionless: return "dimensionless";
  }
  return "?";
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void validate_curve(const Curve& c) {
  if (c.x.size() != c.y.size()) throw GridMismatch("curve: x and y sizes differ");
  if (c.x.empty()) throw GridMismatch("curve: empty");
  for (size_t i = 0; i < c.x.size(); ++i) {
    if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i]))
      throw GridMismatch("curve: non-finite entry at index " + std::to_string(i));
    if (i > 0 && !(c.x[i] > c.x[i - 1]))
      throw GridMismatch("curve: x grid must be strictly increasing");
  }
}

Curve normalized(const Curve& c) {
  validate_curve(c);
  const double integral = simpson(c.x, c.y);
  if (!(integral > 0)) throw NumericError("normalized: curve integral must be > 0");
  Curve out = c;
  for (double& v : out.y) v /= integral;
  out.meta.model = c.meta.model.empty() ? "normalized" : c.meta.model + "-normalized";
  return out;
}

void write_csv(const std::string& path, const std::vector<Curve>& curves) {
  if (curves.empty()) throw NumericError("write_csv: no curves");
  for (const auto& c : curves) {
    validate_curve(c);
    if (c.x != curves.front().x) throw GridMismatch("write_csv: curves use different x grids");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_csv: cannot open " + path);
  out << curves.front().meta.x_label;
  for (const auto& c : curves) out << ',' << (c.meta.model.empty() ? c.meta.y_label : c.meta.model);
  out << '\n';
  for (size_t i = 0; i < curves.front().x.size(); ++i) {
    out << fmt17(curves.front().x[i]);
    for (const auto& c : curves) out << ',' << fmt17(c.y[i]);
    out << '\n';
  }
  if (!out) throw Error("write_csv: write failed for " + path);
}

void write_json(const std::string& path, const Curve& curve) {
  validate_curve(curve);
  nlohmann::json j;
  j["meta"] = {
      {"x_label", curve.meta.x_label},
      {"y_label", curve.meta.y_label},
      {"x_kind", axis_kind_name(curve.meta.x_kind)},
      {"model", curve.meta.model},
  };
  j["x"] = curve.x;
  j["y"] = curve.y;
  j["flags"] = curve.meta.flags;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_json: cannot open " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error("write_json: write failed for " + path);
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw ValidationError("grid", "need n >= 2 and hi > lo");
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  out.back() = hi;
  return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (!(lo > 0)) throw ValidationError("grid", "log grid needs lo > 0");
  std::vector<double> out = linspace(std::log(lo), std::log(hi), n);
  for (double& v : out) v = std::exp(v);
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace qtoa

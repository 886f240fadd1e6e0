#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "stc/errors.hpp"

namespace stc {

/// Axis-aligned box in R^n, stored as per-axis [lo, hi] intervals.
struct Box {
  std::vector<std::array<double, 2>> iv;

  Box() = default;
  explicit Box(std::vector<std::array<double, 2>> intervals) : iv(std::move(intervals)) {
    validate();
  }

  int dim() const { return static_cast<int>(iv.size()); }
  double lo(int i) const { return iv[i][0]; }
  double hi(int i) const { return iv[i][1]; }
  double width(int i) const { return iv[i][1] - iv[i][0]; }

  void validate() const {
    for (const auto& [lo, hi] : iv)
      if (!(lo <= hi)) throw ConfigError("box interval with lo > hi");
  }

  bool contains(std::span<const double> x, double tol = 0.0) const {
    if (static_cast<int>(x.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i)
      if (x[i] < iv[i][0] - tol || x[i] > iv[i][1] + tol) return false;
    return true;
  }

  /// Radius of the largest ball centered at the box midpoint that fits
  /// inside the box: the minimum half-width.
  double inradius() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& [lo, hi] : iv) r = std::min(r, 0.5 * (hi - lo));
    return r;
  }

  void clamp(std::span<const double> x, std::span<double> out) const {
    for (int i = 0; i < dim(); ++i) out[i] = std::clamp(x[i], iv[i][0], iv[i][1]);
  }

  /// Symmetric inflation: each interval scaled about its midpoint by (1+f).
  Box inflated(double f) const {
    Box b = *this;
    for (auto& [lo, hi] : b.iv) {
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo) * (1.0 + f);
      lo = mid - half;
      hi = mid + half;
    }
    return b;
  }
};

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return s;
}

inline double norm(std::span<const double> x) { return std::sqrt(norm2(x)); }

inline bool all_finite(std::span<const double> x) {
  for (double c : x)
    if (!std::isfinite(c)) return false;
  return true;
}

}  // namespace stc

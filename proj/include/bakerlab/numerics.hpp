#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "bakerlab/rng.hpp"

namespace bakerlab {

using Complex = std::complex<double>;

inline double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  // fmod can land exactly on 2*pi after the correction
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  double slope_se = 0;  // standard error of the slope
  std::size_t n = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  f.n = x.size();
  if (x.size() != y.size() || x.size() < 3) return f;
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  if (x.size() > 2) {
    double var = ss_res / (n - 2.0);
    f.slope_se = std::sqrt(var / sxx);
  }
  return f;
}

// 2*atanh(t) through log1p, keeps ~full precision for t near 0 and near 1.
inline double two_arctanh(double t) { return std::log1p(2.0 * t / (1.0 - t)); }

}  // namespace bakerlab

#include "bakerlab/hyperbolic.hpp"

#include <cmath>

#include "bakerlab/errors.hpp"

namespace bakerlab {

double dist_disc(Complex z1, Complex z2) {
  if (std::abs(z1) >= 1.0 || std::abs(z2) >= 1.0)
    throw ComputeError("DomainViolation", "dist_disc: point not strictly inside the unit disc");
  double t = std::abs((z1 - z2) / (1.0 - z1 * std::conj(z2)));
  return two_arctanh(t);
}

double dist_halfplane(const HalfPlane& h, Complex z1, Complex z2) {
  Complex w1 = h.to_standard(z1);
  Complex w2 = h.to_standard(z2);
  if (w1.real() <= 0 || w2.real() <= 0)
    throw ComputeError("DomainViolation", "dist_halfplane: point not inside the half-plane");
  double t = std::abs((w1 - w2) / (w1 + std::conj(w2)));
  return two_arctanh(t);
}

namespace {

struct SimpsonState {
  const DistEstimator* est;
  Complex z1, dz;
  double seg_len;
  int evals = 0;
  int cap = 1 << 14;
  double err_acc = 0;

  double f(double t) {
    ++evals;
    double d = (*est)(z1 + t * dz);
    if (d <= 0)
      throw ComputeError("SegmentLeavesDomain",
                         "dist_domain_upper: boundary-distance estimate <= 0 on the segment");
    return 2.0 / d * seg_len;
  }
};

double adaptive(SimpsonState& s, double a, double b, double fa, double fm, double fb, double whole,
                double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = s.f(lm), frm = s.f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || s.evals >= s.cap || std::abs(delta) <= 15.0 * tol) {
    s.err_acc += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adaptive(s, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         adaptive(s, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

}  // namespace

QuadResult dist_domain_upper(const DistEstimator& est, Complex z1, Complex z2) {
  if (z1 == z2) return {0, 0};
  SimpsonState s{&est, z1, z2 - z1, std::abs(z2 - z1)};
  double fa = s.f(0), fm = s.f(0.5), fb = s.f(1);
  double whole = (fa + 4.0 * fm + fb) / 6.0;
  double tol = std::max(1e-9, 1e-12 * whole);
  double v = adaptive(s, 0, 1, fa, fm, fb, whole, tol, 40);
  return {v, s.err_acc};
}

bool MetricModel::contains(Complex z) const {
  switch (kind) {
    case Kind::Disc:
      return std::abs(z) < 1.0;
    case Kind::HalfPlane:
      return half.contains(z);
    case Kind::DomainUpperBound:
      return dist_lower(z) > 0;
  }
  return false;
}

double MetricModel::distance(Complex z1, Complex z2) const {
  switch (kind) {
    case Kind::Disc:
      return dist_disc(z1, z2);
    case Kind::HalfPlane:
      return dist_halfplane(half, z1, z2);
    case Kind::DomainUpperBound:
      return dist_domain_upper(dist_lower, z1, z2).value;
  }
  return 0;
}

StepSequence step_sequence(const MapSpec& map, Complex z0, const MetricModel& metric, long N) {
  if (N < 1) throw ConfigError("InvalidParam", "step_sequence: N must be >= 1");
  StepSequence seq;
  seq.upper_bound = metric.is_upper_bound();
  seq.d.reserve(static_cast<std::size_t>(N));
  if (!metric.contains(z0))
    throw ComputeError("OrbitLeftDomain", "step_sequence: z0 outside the metric model domain", 0);
  Complex z = z0;
  for (long n = 0; n < N; ++n) {
    EvalResult r = eval(map, z);
    if (r.status == EvalStatus::Pole)
      throw ComputeError("PoleSignal", "step_sequence: orbit hit a pole", n);
    if (r.status != EvalStatus::Ok)
      throw ComputeError("Overflow", "step_sequence: orbit evaluation failed", n);
    if (!metric.contains(r.value))
      throw ComputeError("OrbitLeftDomain", "step_sequence: orbit left the model domain", n + 1);
    seq.d.push_back(metric.distance(r.value, z));
    z = r.value;
  }
  return seq;
}

}  // namespace bakerlab

#pragma once

#include <functional>
#include <utility>

#include "bakerlab/maps.hpp"

namespace bakerlab {

// Half-plane { z : Re(z * conj(direction)) > offset }. |direction| = 1.
struct HalfPlane {
  Complex direction{1.0, 0.0};
  double offset = 0;

  // signed distance to the bounding line, positive inside
  double signed_dist(Complex z) const {
    return (z * std::conj(direction)).real() - offset;
  }
  // coordinates in which the domain is the standard right half-plane
  Complex to_standard(Complex z) const { return z * std::conj(direction) - offset; }
  bool contains(Complex z) const { return signed_dist(z) > 0; }
};

using DistEstimator = std::function<double(Complex)>;  // lower bound for dist(z, boundary)

// Density normalisation: 2/(1-|z|^2) on the disc, hence 1/(distance to the
// line) on half-planes; the two are exchanged exactly by the Cayley map.
double dist_disc(Complex z1, Complex z2);
double dist_halfplane(const HalfPlane& h, Complex z1, Complex z2);

struct QuadResult {
  double value = 0;
  double error = 0;  // adaptive-quadrature error estimate
};

// Integrates 2/dist along [z1, z2]; an upper bound for the true hyperbolic
// distance whenever the estimator under-estimates the boundary distance.
QuadResult dist_domain_upper(const DistEstimator& dist_to_boundary, Complex z1, Complex z2);

struct MetricModel {
  enum class Kind { Disc, HalfPlane, DomainUpperBound };
  Kind kind = Kind::Disc;
  HalfPlane half;
  DistEstimator dist_lower;  // DomainUpperBound only

  static MetricModel disc() { return {}; }
  static MetricModel half_plane(Complex direction, double offset) {
    MetricModel m;
    m.kind = Kind::HalfPlane;
    m.half = HalfPlane{direction / std::abs(direction), offset};
    return m;
  }
  static MetricModel upper_bound(DistEstimator est) {
    MetricModel m;
    m.kind = Kind::DomainUpperBound;
    m.dist_lower = std::move(est);
    return m;
  }

  bool is_upper_bound() const { return kind == Kind::DomainUpperBound; }
  bool contains(Complex z) const;
  double distance(Complex z1, Complex z2) const;
};

struct StepSequence {
  std::vector<double> d;  // d[k] = rho(f^{k+1+n_offset}(z0), f^{k+n_offset}(z0))
  long n_offset = 0;
  bool upper_bound = false;
};

// d[n] for n = 0..N-1 along the orbit of z0; throws OrbitLeftDomain / the
// propagated pole or overflow signal if the orbit exits the model domain.
StepSequence step_sequence(const MapSpec& map, Complex z0, const MetricModel& metric, long N);

}  // namespace bakerlab

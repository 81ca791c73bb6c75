#pragma once

#include <cstdint>
#include <limits>
#include <memory>

#include "bakerlab/hyperbolic.hpp"
#include "bakerlab/maps.hpp"

namespace bakerlab {

struct TargetBox {
  double re_min = -1, re_max = 1;
  double im_min = -1, im_max = 1;

  bool contains(Complex z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

// Membership oracle domain for a genuine Baker domain: a point is in U when
// its orbit reaches the forward-invariant entry region. The optional strip
// half-width distinguishes a domain from its translates when the map has a
// ladder of them.
struct OracleDomain {
  MapSpec map;
  HalfPlane entry;
  double strip_center = 0;  // along-boundary coordinate Im(z * conj(direction))
  double strip_halfwidth = std::numeric_limits<double>::infinity();
  long budget = 200;
  double big_radius = 1e8;
  double pole_eps_scale = kDefaultPoleEps;

  bool in_entry(Complex z) const {
    if (!entry.contains(z)) return false;
    double t = (z * std::conj(entry.direction)).imag();
    return std::abs(t - strip_center) < strip_halfwidth;
  }
};

enum class Membership { InU, NotInU, Unknown };

Membership membership(const OracleDomain& domain, Complex z);

// Sampled forward-invariance check of the entry region; throws ComputeError
// if a sample escapes it.
void validate_oracle_domain(const OracleDomain& domain, uint64_t seed = 1, int samples = 64);

struct DomainModel {
  enum class Kind { UnitDisc, HalfPlane, Oracle };
  Kind kind = Kind::UnitDisc;
  HalfPlane half;
  std::shared_ptr<OracleDomain> oracle;

  static DomainModel unit_disc() { return {}; }
  static DomainModel half_plane(Complex direction, double offset) {
    DomainModel d;
    d.kind = Kind::HalfPlane;
    d.half = HalfPlane{direction / std::abs(direction), offset};
    return d;
  }
  static DomainModel oracle_domain(OracleDomain od) {
    DomainModel d;
    d.kind = Kind::Oracle;
    d.oracle = std::make_shared<OracleDomain>(std::move(od));
    return d;
  }
};

struct HarmonicSample {
  Complex boundary_point{0, 0};
  long walk_steps = 0;
  double terminal_radius = 0;
  bool stuck = false;
};

// Harmonic-measure boundary sample from `basepoint`. Disc and half-plane
// domains use the exact first-exit laws; oracle domains run walk-on-spheres
// against a ray-bisection distance estimate.
HarmonicSample wos_sample(const DomainModel& domain, Complex basepoint, double eps_boundary,
                          uint64_t seed);

// Generic walker against an explicit lower-bound distance estimator (the
// exact-dist path is also what validates the walker in tests).
class Rng;
HarmonicSample wos_walk(const DistEstimator& dist_lower, Complex basepoint, double eps_boundary,
                        Rng& rng, long max_steps = 1000000);

enum class FateKind { Escaping, Recurrent, PoleHit, Undefined };

const char* to_string(FateKind f);

struct Fate {
  FateKind kind = FateKind::Undefined;
  long returns = 0;
  long steps = 0;
  bool precision_flag = false;
};

struct FateOptions {
  long iter_budget = 1000000;
  double escape_radius = 1e8;
  int confirm_window = 3;
  long min_returns = 10;
  TargetBox target;
  double pole_eps_scale = kDefaultPoleEps;
  double eps_boundary = 1e-9;  // oracle-domain boundary sampling tolerance
};

// Classifies one boundary start. Maps with real coefficients and a real start
// iterate on the line directly (the boundary dynamics is exact there); the
// complex path mirrors iterate()'s signals.
Fate boundary_fate(const MapSpec& map, Complex x0, const FateOptions& opt);

struct FateSampleRow {
  long sample_id = 0;
  Complex boundary_point{0, 0};
  FateKind fate = FateKind::Undefined;
  long returns = 0;
  long steps = 0;
};

struct FateReport {
  long n_samples = 0;
  long escaping = 0;
  long recurrent = 0;
  long pole_hit = 0;
  long undefined = 0;
  FateOptions params;
  uint64_t seed = 0;
  std::vector<FateSampleRow> rows;
};

FateReport dichotomy_experiment(const MapSpec& map, const DomainModel& domain, Complex basepoint,
                                long n_samples, const FateOptions& opt, uint64_t seed,
                                int threads = 0);

}  // namespace bakerlab

#pragma once

#include <cstdint>
#include <vector>

#include "bakerlab/maps.hpp"

namespace bakerlab {

enum class Multiplicity { Attracting, Parabolic2, Parabolic3, Unknown };

struct DenjoyWolffData {
  Complex p{1.0, 0.0};          // Denjoy-Wolff point on the unit circle
  double q_derivative = 0;      // |g'(p)|
  double q_root = 0;            // (1 - |g^n(w0)|)^{1/n} at the adaptive n
  long q_root_n = 0;            // iterations used by the root estimator
  Multiplicity multiplicity = Multiplicity::Unknown;
  double gprime_dist_to_1 = 0;  // |g'(p) - 1|
  double gsecond_abs = 0;       // |g''(p)|
  int fixed_point_cluster = 1;  // multiplicity of p as root of g(z) - z
  double q_agreement = 0;       // |q_derivative - q_root|
};

// Thresholds fixed by design: parabolic when |g'(p)-1| < 1e-8, Parabolic3 when
// additionally |g''(p)| < 1e-6. Recorded in reports.
inline constexpr double kParabolicTol = 1e-8;
inline constexpr double kParabolic3Tol = 1e-6;

// Locates p from the fixed points of the rational extension (root cluster
// means stay well conditioned at parabolic points), cross-checks against the
// interior orbit of w0, and runs the n-th-root estimator of q with an
// adaptive iteration count capped at `budget`.
DenjoyWolffData find_denjoy_wolff(const MapSpec& g, Complex w0, long budget = (1L << 26));

// a_n = 1 - |g^n(w0)| for n = 1..N, by the multiplicative radial recurrence
// (no 1-|w| cancellation), as log values.
std::vector<double> radial_log_decay(const MapSpec& g, Complex w0, long N);

enum class Precision { Double, Extended };

struct BoundaryOrbit {
  std::vector<double> theta;  // theta[0] = theta0; angles in [0, 2pi)
  bool precision_loss = false;
  long valid_count = 0;  // entries before the derivative-product budget ran out
};

// Boundary circle dynamics theta -> arg g(e^{i theta}). Extended runs the
// complex iteration in double-double. The running derivative product is the
// Lyapunov proxy; once it exceeds the precision budget the orbit is truncated
// and flagged.
BoundaryOrbit boundary_orbit(const MapSpec& g, double theta0, long N,
                             Precision precision = Precision::Extended);

// counterclockwise half-open arc of the unit circle
struct CircleArc {
  double start = 0;   // radians
  double length = 0;  // in (0, 2pi]

  static CircleArc from_endpoints(double a, double b);
  bool contains(double theta) const;
  double end() const { return start + length; }
};

struct MuPValue {
  double value = 0;
  double quad_error = 0;
  bool infinite = false;  // p in the closure of the arc
};

// mu_p(arc) = (1/2pi) * integral over the arc of d theta / |e^{i theta} - p|^2,
// by the closed-form antiderivative.
MuPValue mu_p(const CircleArc& arc, Complex p);

// All d preimage arcs of `arc` under the boundary map of a finite Blaschke
// product (degree-1 kinds use the exact inverse).
std::vector<CircleArc> preimage_arcs(const MapSpec& g, const CircleArc& arc);

struct MuInvarianceResult {
  double lhs = 0;  // mu_p over the preimage arcs
  double rhs = 0;  // q * mu_p(arc)
  double rel_err = 0;
  double q = 0;
};

MuInvarianceResult check_mu_invariance(const MapSpec& g, const CircleArc& arc);

struct RecurrenceResult {
  double fraction = 0;
  long recurrent_count = 0;
  long n_samples = 0;
  double precision_loss_ratio = 0;
};

// Fraction of uniform boundary starts whose circle orbit hits `target` at
// least min_returns times within `budget` steps. Parallel over samples with
// derived RNG streams; identical for every thread count.
RecurrenceResult recurrence_stats(const MapSpec& g, const CircleArc& target, long n_samples,
                                  long budget, long min_returns, uint64_t seed, int threads = 0,
                                  Precision precision = Precision::Extended);

// boundary circle map derivative |zeta g'(zeta)/g(zeta)| at zeta = e^{i theta}
double circle_derivative(const MapSpec& g, double theta);

}  // namespace bakerlab

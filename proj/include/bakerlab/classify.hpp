#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bakerlab/hyperbolic.hpp"
#include "bakerlab/inner.hpp"

namespace bakerlab {

enum class BakerVerdict {
  Hyperbolic,
  SimplyParabolic,
  DoublyParabolic,
  HyperbolicOrSimplyParabolic,
  Unresolved,
};

const char* to_string(BakerVerdict v);

// Fixed trend-detection constants, echoed into every report.
struct ClassifierThresholds {
  double q_tol = 1e-6;        // hyperbolic iff q < 1 - q_tol
  double ratio_tol = 1e-3;    // refine to hyperbolic iff |f^{n+1}/f^n| -> a > 1 + ratio_tol
  double slope_max = -0.5;    // log d_n vs log n slope certifying d_n -> 0
  double r2_min = 0.9;
  double proxy_min = 1e-2;    // |f^{n+1}-f^n| / dist(f^n, boundary) floor
};

struct BakerClassification {
  BakerVerdict verdict = BakerVerdict::Unresolved;
  std::optional<double> q_est;
  std::optional<double> b_est;        // step-distance limit when positive
  std::optional<double> ratio_limit;  // |f^{n+1}(z)/f^n(z)| tail estimate
  double fit_slope = 0;
  double fit_r2 = 0;
  ClassifierThresholds thresholds;
  std::string note;
};

BakerClassification classify_inner(const DenjoyWolffData& dw, const StepSequence& steps);
BakerClassification classify_plane(const MapSpec& map, Complex z0, const MetricModel& metric,
                                   long N);

struct SeriesSample {
  std::vector<double> a;  // positive entries
  long n_offset = 1;      // index of a[0]
};

// a_n = 1 - |g^n(w0)|, n = 1..N
SeriesSample radial_series(const MapSpec& g, Complex w0, long N);

enum class AaronsonVerdict { ConvergesAEConvergence, DivergesConservative, Inconclusive };

const char* to_string(AaronsonVerdict v);

struct AaronsonEvidence {
  double q_est = 0;          // a_n^{1/n} at the sample end
  double tail_bound = -1;    // geometric tail bound when ratios stabilise below 1
  double raabe_min = 0;      // min of n(a_n/a_{n+1} - 1) over the tail
  bool gauss_divergent = false;
  std::string route;
};

AaronsonVerdict aaronson_verdict(const SeriesSample& sample, AaronsonEvidence* evidence = nullptr);

enum class GaussVerdict { DivergentByGauss, ConditionNotMet };

struct GaussResult {
  GaussVerdict verdict = GaussVerdict::ConditionNotMet;
  long n0 = -1;  // smallest index from which the ratio bound holds through the end
};

// ratio test: a_n / a_{n+1} <= 1 + 1/n + B_cap/n^r for all sampled n >= n0
GaussResult gauss_divergence(const SeriesSample& sample, double r, double B_cap);

struct ThmCFit {
  bool satisfied = false;
  double r_est = 0;
  double c_est = 0;
  double slope_se = 0;
  bool dominated = false;  // d_n <= 1/n throughout
};

// Fits log|d_n - 1/n| against log n over the asymptotic tail; satisfied when
// the decay exponent exceeds 1 at 95% confidence or d_n <= 1/n outright.
ThmCFit thmc_fit(const StepSequence& steps);

struct RipponStallardResult {
  std::optional<double> K;  // largest K >= 1 + 1e-6 with |f^{n+1}| > K |f^n| for all n
  enum class SqrtSum { Finite, Divergent, Inconclusive } sqrt_sum = SqrtSum::Inconclusive;
  double bound = 0;         // partial sum (+ geometric tail when finite)
  double growth_exponent = 0;
};

const char* to_string(RipponStallardResult::SqrtSum v);

RipponStallardResult rippon_stallard_check(const OrbitRecord& orbit);

struct PropDReport {
  bool pass = false;
  bool envelope_ok = false;       // |f(z) - z - a| < c0/Re(z/a)^r on samples
  double envelope_max_ratio = 0;  // max |h| * Re^r / c0 observed
  double half_sum_at_c1 = 0;      // sum c0/(c1 + k - 3/2)^r
  bool half_condition_at_c1 = false;
  double c1_effective = 0;        // smallest c >= c1 with the sum < 1/2
  bool c1_effective_found = false;
  bool induction_ok = false;      // Re drift inequality along sampled orbits
  long violations = 0;
  Complex witness{0, 0};
  int z_samples = 0;
  int n_max = 0;
  uint64_t seed = 0;
};

// Drift-form verifier for f(z) = z + a + h(z): envelope bound on seeded
// samples of {Re(z/a) > c1}, the constant condition with c1 enlarged as in
// the underlying argument, and the real-part induction along orbits.
PropDReport propd_verify(const MapSpec& map, double c0, double c1, double r, int z_samples,
                         int n_max, uint64_t seed, int threads = 0);

}  // namespace bakerlab

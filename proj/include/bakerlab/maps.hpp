#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bakerlab/numerics.hpp"

namespace bakerlab {

enum class MapKind {
  Fatou,                // z + 1 + e^{-z}
  BakerDominguez,       // z + e^{-z}
  Tan,                  // z + tan z
  Absorb,               // z + i + tan z
  ManeTruncated,        // z - sum_{n<terms} 2z/(z^2 - n^delta), 1 < delta < 2
  MobiusDisc,           // (z + a)/(1 + a z), 0 < a < 1
  ParabolicMobiusDisc,  // disc automorphism conjugate to w -> w + i on {Re w > 0}
  BlaschkeFinite,       // rotation * prod (z - z_k)/(1 - conj(z_k) z)
  AffineModel,          // lambda * z
  DoublingExp,          // 2z + e^{-z}
};

struct MapSpec {
  MapKind kind = MapKind::Fatou;
  std::string name;

  double mane_delta = 0;
  int mane_terms = 0;
  std::vector<double> mane_powers;  // n^delta cache, filled by the registry

  double mobius_a = 0;

  std::vector<Complex> zeros;  // BlaschkeFinite
  Complex rotation{1.0, 0.0};

  Complex affine_lambda{0.0, 0.0};

  int tan_sign = +1;  // which half-plane of the Tan pair, +1 upper / -1 lower

  std::optional<Complex> baker_direction;  // translation constant of the drift form

  bool is_inner() const {
    return kind == MapKind::MobiusDisc || kind == MapKind::ParabolicMobiusDisc ||
           kind == MapKind::BlaschkeFinite;
  }
  bool real_coefficients() const {
    switch (kind) {
      case MapKind::Fatou:
      case MapKind::BakerDominguez:
      case MapKind::Tan:
      case MapKind::ManeTruncated:
      case MapKind::DoublingExp:
        return true;
      case MapKind::AffineModel:
        return affine_lambda.imag() == 0;
      default:
        return false;
    }
  }
  // finite Blaschke degree for inner kinds, 0 otherwise
  int degree() const {
    switch (kind) {
      case MapKind::MobiusDisc:
      case MapKind::ParabolicMobiusDisc:
        return 1;
      case MapKind::BlaschkeFinite:
        return static_cast<int>(zeros.size());
      default:
        return 0;
    }
  }
};

inline constexpr double kDefaultPoleEps = 1e-12;  // scaled by (1 + |z|)
inline constexpr double kOverflowLimit = 1e300;

enum class EvalStatus { Ok, Pole, Overflow, OutOfRange };

struct EvalResult {
  Complex value{0, 0};
  EvalStatus status = EvalStatus::Ok;
  double pole_distance = 0;  // set when status == Pole
};

EvalResult eval(const MapSpec& map, Complex z, double pole_eps_scale = kDefaultPoleEps);

// d f / d z; defined away from poles for every registered kind
Complex derivative(const MapSpec& map, Complex z);

// Upper bound for the dropped tail of the truncated series map at |z| = r.
// Valid in the accepted region |z|^2 < terms^delta / 2.
double mane_tail_estimate(const MapSpec& map, double r);

enum class TerminationKind { BudgetExhausted, Escaped, PoleHit, Overflow, PrecisionLoss };

struct OrbitRecord {
  std::vector<Complex> points;  // points[0] = z0
  TerminationKind termination = TerminationKind::BudgetExhausted;
  long event_index = -1;  // first escape crossing / pole index / loss index
  double escape_radius = 0;
  long n_steps = 0;  // number of applications of the map recorded
};

struct IterateOptions {
  long budget = 1000;
  double escape_radius = 1e6;
  double pole_eps_scale = kDefaultPoleEps;
  int confirm_window = 3;         // consecutive steps beyond the radius to call escape
  double precision_tol = 1e-6;    // flag when condition * eps exceeds this
};

OrbitRecord iterate(const MapSpec& map, Complex z0, const IterateOptions& opt);

// Registry: stable string names and parameter keys used by the CLI config schema.
MapSpec registry_get(const std::string& name, const nlohmann::json& params);

struct MapInfo {
  std::string name;
  std::string formula;
  std::string params_doc;
  std::string origin;
};

std::vector<MapInfo> registry_catalog();

Complex parse_complex(const nlohmann::json& v);     // number, [re, im], or "a+bi"
Complex parse_complex(const std::string& text);

}  // namespace bakerlab

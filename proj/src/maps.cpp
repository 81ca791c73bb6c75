#include "bakerlab/maps.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "bakerlab/errors.hpp"

namespace bakerlab {

namespace {

const Complex kI{0.0, 1.0};

bool bad(Complex w) {
  return !std::isfinite(w.real()) || !std::isfinite(w.imag()) || std::abs(w) > kOverflowLimit;
}

// tan z; switches to the Moebius-of-exponential form far from the real axis
// where sin/cos would overflow.
Complex tan_c(Complex z) {
  double y = z.imag();
  if (y > 20.0) {
    Complex q = std::exp(2.0 * kI * z);  // |q| = e^{-2y}, tiny
    return kI * (1.0 - q) / (1.0 + q);
  }
  if (y < -20.0) {
    Complex q = std::exp(-2.0 * kI * z);
    return -kI * (1.0 - q) / (1.0 + q);
  }
  return std::tan(z);
}

// distance from z to the pole lattice pi/2 + k*pi of tan
double tan_pole_distance(Complex z) {
  double k = std::round(z.real() / kPi - 0.5);
  double px = (k + 0.5) * kPi;
  return std::abs(z - Complex{px, 0.0});
}

Complex exp_minus(Complex z, bool* overflow) {
  if (-z.real() > 709.0) {
    *overflow = true;
    return {0, 0};
  }
  return std::exp(-z);
}

}  // namespace

EvalResult eval(const MapSpec& m, Complex z, double pole_eps_scale) {
  const double peps = pole_eps_scale * (1.0 + std::abs(z));
  bool overflow = false;
  Complex w;
  switch (m.kind) {
    case MapKind::Fatou:
      w = z + 1.0 + exp_minus(z, &overflow);
      break;
    case MapKind::BakerDominguez:
      w = z + exp_minus(z, &overflow);
      break;
    case MapKind::DoublingExp:
      w = 2.0 * z + exp_minus(z, &overflow);
      break;
    case MapKind::Tan:
    case MapKind::Absorb: {
      double d = tan_pole_distance(z);
      if (d < peps) return {z, EvalStatus::Pole, d};
      w = z + tan_c(z);
      if (m.kind == MapKind::Absorb) w += kI;
      break;
    }
    case MapKind::ManeTruncated: {
      double r2 = std::norm(z);
      double first_omitted = m.mane_powers.empty()
                                 ? std::pow(static_cast<double>(m.mane_terms), m.mane_delta)
                                 : m.mane_powers.back();
      // powers cache carries n^delta for n = 0..terms (one past the sum)
      if (r2 >= 0.5 * first_omitted) return {z, EvalStatus::OutOfRange, 0};
      Complex z2 = z * z;
      Complex acc{0, 0};
      for (int n = 0; n < m.mane_terms; ++n) {
        double p = m.mane_powers[n];
        Complex den = z2 - p;
        double dmag = std::abs(den);
        if (n == 0) {
          double dist = std::abs(z);
          if (dist < peps) return {z, EvalStatus::Pole, dist};
        } else {
          double dist = dmag / (2.0 * std::sqrt(p) + 1.0);
          if (dist < peps) return {z, EvalStatus::Pole, dist};
        }
        acc += 2.0 * z / den;
      }
      w = z - acc;
      break;
    }
    case MapKind::MobiusDisc: {
      Complex den = 1.0 + m.mobius_a * z;
      double dmag = std::abs(den);
      if (dmag < peps) return {z, EvalStatus::Pole, dmag};
      w = (z + m.mobius_a) / den;
      break;
    }
    case MapKind::ParabolicMobiusDisc: {
      Complex den = Complex{2.0, 1.0} - kI * z;
      double dmag = std::abs(den);
      if (dmag < peps) return {z, EvalStatus::Pole, dmag};
      w = (Complex{2.0, -1.0} * z + kI) / den;
      break;
    }
    case MapKind::BlaschkeFinite: {
      w = m.rotation;
      for (const Complex& zk : m.zeros) {
        Complex den = 1.0 - std::conj(zk) * z;
        double dmag = std::abs(den);
        if (dmag < peps) return {z, EvalStatus::Pole, dmag};
        w *= (z - zk) / den;
      }
      break;
    }
    case MapKind::AffineModel:
      w = m.affine_lambda * z;
      break;
  }
  if (overflow || bad(w)) return {z, EvalStatus::Overflow, 0};
  return {w, EvalStatus::Ok, 0};
}

Complex derivative(const MapSpec& m, Complex z) {
  switch (m.kind) {
    case MapKind::Fatou:
    case MapKind::BakerDominguez:
      return 1.0 - std::exp(-z);
    case MapKind::DoublingExp:
      return 2.0 - std::exp(-z);
    case MapKind::Tan:
    case MapKind::Absorb: {
      Complex t = tan_c(z);
      return 2.0 + t * t;  // 1 + sec^2 = 1 + (1 + tan^2)
    }
    case MapKind::ManeTruncated: {
      Complex z2 = z * z;
      Complex acc{0, 0};
      for (int n = 0; n < m.mane_terms; ++n) {
        Complex den = z2 - m.mane_powers[n];
        acc += 2.0 * (z2 + m.mane_powers[n]) / (den * den);
      }
      return 1.0 + acc;
    }
    case MapKind::MobiusDisc: {
      Complex den = 1.0 + m.mobius_a * z;
      return (1.0 - m.mobius_a * m.mobius_a) / (den * den);
    }
    case MapKind::ParabolicMobiusDisc: {
      Complex den = Complex{2.0, 1.0} - kI * z;
      return 4.0 / (den * den);
    }
    case MapKind::BlaschkeFinite: {
      // product rule; stays valid at the zeros themselves
      Complex sum{0, 0};
      for (std::size_t k = 0; k < m.zeros.size(); ++k) {
        Complex denk = 1.0 - std::conj(m.zeros[k]) * z;
        Complex term = (1.0 - std::norm(m.zeros[k])) / (denk * denk);
        for (std::size_t j = 0; j < m.zeros.size(); ++j) {
          if (j == k) continue;
          term *= (z - m.zeros[j]) / (1.0 - std::conj(m.zeros[j]) * z);
        }
        sum += term;
      }
      return m.rotation * sum;
    }
    case MapKind::AffineModel:
      return m.affine_lambda;
  }
  return {0, 0};
}

double mane_tail_estimate(const MapSpec& m, double r) {
  if (m.kind != MapKind::ManeTruncated) return 0;
  double N = static_cast<double>(m.mane_terms);
  double Nd = std::pow(N, m.mane_delta);
  double r2 = r * r;
  if (r2 >= 0.5 * Nd) return std::numeric_limits<double>::infinity();
  // first omitted term exactly, integral comparison for the rest
  double head = 2.0 * r / (Nd - r2);
  double integral = std::pow(N, 1.0 - m.mane_delta) / (m.mane_delta - 1.0) / (1.0 - r2 / Nd);
  return head + 2.0 * r * integral;
}

OrbitRecord iterate(const MapSpec& m, Complex z0, const IterateOptions& opt) {
  if (opt.budget < 1) throw ConfigError("InvalidParam", "iterate budget must be >= 1");
  if (!(opt.escape_radius > 0)) throw ConfigError("InvalidParam", "escape_radius must be > 0");
  OrbitRecord rec;
  rec.escape_radius = opt.escape_radius;
  rec.points.reserve(static_cast<std::size_t>(std::min<long>(opt.budget + 1, 1 << 22)));
  rec.points.push_back(z0);

  // Condition estimate for the relative error of the current point; one
  // application multiplies it by |f'| |z| / |f(z)| (>= 1 kept as a floor).
  double cond = 1.0;
  const double eps = 0x1.0p-52;

  auto check_pole_at = [&](Complex z, long idx) -> bool {
    EvalResult probe = eval(m, z, opt.pole_eps_scale);
    if (probe.status == EvalStatus::Pole) {
      rec.termination = TerminationKind::PoleHit;
      rec.event_index = idx;
      return true;
    }
    return false;
  };
  if (check_pole_at(z0, 0)) {
    rec.n_steps = 0;
    return rec;
  }

  int consec = 0;
  long first_cross = -1;
  Complex z = z0;
  for (long n = 0; n < opt.budget; ++n) {
    EvalResult r = eval(m, z, opt.pole_eps_scale);
    if (r.status == EvalStatus::Pole) {
      rec.termination = TerminationKind::PoleHit;
      rec.event_index = n;
      rec.n_steps = n;
      return rec;
    }
    if (r.status == EvalStatus::Overflow) {
      rec.termination = TerminationKind::Overflow;
      rec.event_index = n;
      rec.n_steps = n;
      return rec;
    }
    if (r.status == EvalStatus::OutOfRange) {
      rec.termination = TerminationKind::PrecisionLoss;
      rec.event_index = n;
      rec.n_steps = n;
      return rec;
    }
    Complex w = r.value;
    double az = std::abs(z), aw = std::abs(w);
    if (aw > 0) {
      double factor = std::abs(derivative(m, z)) * az / aw;
      cond = cond * std::max(1.0, factor) + 1.0;
    }
    rec.points.push_back(w);
    rec.n_steps = n + 1;
    if (cond * eps > opt.precision_tol) {
      rec.termination = TerminationKind::PrecisionLoss;
      rec.event_index = n + 1;
      return rec;
    }
    if (aw > opt.escape_radius) {
      if (consec == 0) first_cross = n + 1;
      ++consec;
      if (consec >= opt.confirm_window) {
        rec.termination = TerminationKind::Escaped;
        rec.event_index = first_cross;
        return rec;
      }
    } else {
      consec = 0;
      first_cross = -1;
    }
    z = w;
  }
  rec.termination = TerminationKind::BudgetExhausted;
  return rec;
}

namespace {

struct ParamReader {
  const nlohmann::json& j;
  std::vector<std::string> known;

  bool has(const char* key) {
    known.push_back(key);
    return j.contains(key);
  }
  void finish(const std::string& map_name) const {
    if (!j.is_object()) return;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (std::find(known.begin(), known.end(), it.key()) == known.end())
        throw_invalid_param(it.key(), "unknown parameter for map '" + map_name + "'");
    }
  }
};

}  // namespace

Complex parse_complex(const std::string& text) {
  // forms: "1.5", "2i", "1+2i", "1-2i", "-3.5+0i"
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ConfigError("InvalidParam", "empty complex literal");
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
  }
  auto parse_part = [](std::string part, bool* is_imag) -> double {
    *is_imag = false;
    if (!part.empty() && (part.back() == 'i' || part.back() == 'I')) {
      *is_imag = true;
      part.pop_back();
      if (part.empty() || part == "+") part = "1";
      else if (part == "-") part = "-1";
    }
    std::size_t pos = 0;
    double v = std::stod(part, &pos);
    if (pos != part.size()) throw ConfigError("InvalidParam", "bad complex literal");
    return v;
  };
  try {
    if (split == std::string::npos) {
      bool imag;
      double v = parse_part(s, &imag);
      return imag ? Complex{0, v} : Complex{v, 0};
    }
    bool imag1, imag2;
    double v1 = parse_part(s.substr(0, split), &imag1);
    double v2 = parse_part(s.substr(split), &imag2);
    if (imag1 == imag2) throw ConfigError("InvalidParam", "bad complex literal: " + text);
    return imag1 ? Complex{v2, v1} : Complex{v1, v2};
  } catch (const std::invalid_argument&) {
    throw ConfigError("InvalidParam", "bad complex literal: " + text);
  } catch (const std::out_of_range&) {
    throw ConfigError("InvalidParam", "complex literal out of range: " + text);
  }
}

Complex parse_complex(const nlohmann::json& v) {
  if (v.is_number()) return Complex{v.get<double>(), 0};
  if (v.is_string()) return parse_complex(v.get<std::string>());
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Complex{v[0].get<double>(), v[1].get<double>()};
  throw ConfigError("InvalidParam", "expected complex as number, [re, im] or \"a+bi\"");
}

MapSpec registry_get(const std::string& name, const nlohmann::json& params) {
  std::string key;
  for (char c : name) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  ParamReader p{params, {}};
  MapSpec m;
  m.name = key;

  if (key == "fatou") {
    m.kind = MapKind::Fatou;
    m.baker_direction = Complex{1, 0};
  } else if (key == "baker_dominguez") {
    m.kind = MapKind::BakerDominguez;
  } else if (key == "tan") {
    m.kind = MapKind::Tan;
    m.tan_sign = +1;
    if (p.has("half_plane")) {
      std::string hp = params.at("half_plane").get<std::string>();
      if (hp == "+") m.tan_sign = +1;
      else if (hp == "-") m.tan_sign = -1;
      else throw_invalid_param("half_plane", "expected \"+\" or \"-\"");
    }
    m.baker_direction = Complex{0, static_cast<double>(m.tan_sign)};
  } else if (key == "absorb") {
    m.kind = MapKind::Absorb;
    m.baker_direction = Complex{0, 2};
  } else if (key == "mane") {
    m.kind = MapKind::ManeTruncated;
    if (!p.has("delta")) throw_invalid_param("delta", "required for mane");
    m.mane_delta = params.at("delta").get<double>();
    if (!(m.mane_delta > 1.0 && m.mane_delta < 2.0))
      throw_invalid_param("delta", "must satisfy 1 < delta < 2");
    m.mane_terms = 100;
    if (p.has("terms")) m.mane_terms = params.at("terms").get<int>();
    if (m.mane_terms < 1) throw_invalid_param("terms", "must be >= 1");
    m.mane_powers.resize(m.mane_terms + 1);
    for (int n = 0; n <= m.mane_terms; ++n)
      m.mane_powers[n] = std::pow(static_cast<double>(n), m.mane_delta);
  } else if (key == "mobius") {
    m.kind = MapKind::MobiusDisc;
    m.mobius_a = 0.5;
    if (p.has("a")) m.mobius_a = params.at("a").get<double>();
    if (!(m.mobius_a > 0.0 && m.mobius_a < 1.0))
      throw_invalid_param("a", "must lie strictly in (0, 1)");
  } else if (key == "parabolic_mobius") {
    m.kind = MapKind::ParabolicMobiusDisc;
  } else if (key == "blaschke") {
    m.kind = MapKind::BlaschkeFinite;
    if (!p.has("zeros")) throw_invalid_param("zeros", "required for blaschke");
    for (const auto& zj : params.at("zeros")) {
      Complex zk = parse_complex(zj);
      if (std::abs(zk) >= 1.0) throw_invalid_param("zeros", "zeros must lie strictly inside the disc");
      m.zeros.push_back(zk);
    }
    if (m.zeros.empty()) throw_invalid_param("zeros", "at least one zero required");
    if (p.has("rotation")) {
      m.rotation = parse_complex(params.at("rotation"));
      if (std::abs(std::abs(m.rotation) - 1.0) > 1e-9)
        throw_invalid_param("rotation", "must have unit modulus");
    }
  } else if (key == "affine") {
    m.kind = MapKind::AffineModel;
    m.affine_lambda = Complex{2, 0};
    if (p.has("lambda")) m.affine_lambda = parse_complex(params.at("lambda"));
    if (std::abs(m.affine_lambda) == 0) throw_invalid_param("lambda", "must be nonzero");
  } else if (key == "doubling") {
    m.kind = MapKind::DoublingExp;
  } else {
    throw_unknown_map(name);
  }
  p.finish(key);
  return m;
}

std::vector<MapInfo> registry_catalog() {
  return {
      {"fatou", "z+1+e^{-z}", "", "classical completely invariant Baker domain (drift a=1)"},
      {"baker_dominguez", "z+e^{-z}", "", "Newton map with a ladder of degree-2 Baker domains"},
      {"tan", "z+tan z", "half_plane: \"+\"|\"-\"", "half-plane Baker domains, drift a=+/-i"},
      {"absorb", "z+i+tan z", "", "Newton map with an absorbing upper half-plane, drift a=2i"},
      {"mane", "z - sum 2z/(z^2-n^delta)", "delta in (1,2), terms >= 1",
       "Doering-Mane series map, truncated"},
      {"mobius", "(z+a)/(1+az)", "a in (0,1)", "hyperbolic disc automorphism, boundary fixed points +/-1"},
      {"parabolic_mobius", "((2-i)z+i)/((2+i)-iz)", "",
       "parabolic disc automorphism, conjugate of w -> w+i on the right half-plane"},
      {"blaschke", "rot * prod (z-z_k)/(1-conj(z_k)z)", "zeros: [[re,im],...], rotation: [re,im]",
       "finite Blaschke product"},
      {"affine", "lambda*z", "lambda complex", "linear model map (hyperbolic regime test input)"},
      {"doubling", "2z+e^{-z}", "", "hyperbolic-regime variant of the exponential drift maps"},
  };
}

}  // namespace bakerlab

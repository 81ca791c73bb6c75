#include "bakerlab/inner.hpp"

#include <algorithm>
#include <cmath>

#include "bakerlab/dd.hpp"
#include "bakerlab/errors.hpp"
#include "bakerlab/parallel.hpp"

namespace bakerlab {

namespace {

const Complex kI{0.0, 1.0};

// ---- Blaschke factor form -------------------------------------------------

struct Factors {
  Complex rotation{1, 0};
  std::vector<Complex> zeros;
};

Factors blaschke_factors(const MapSpec& g) {
  switch (g.kind) {
    case MapKind::MobiusDisc:
      // (z+a)/(1+az) = (z - (-a)) / (1 - conj(-a) z)
      return {Complex{1, 0}, {Complex{-g.mobius_a, 0}}};
    case MapKind::ParabolicMobiusDisc: {
      // ((2-i)z + i)/((2+i) - iz): zero at -i/(2-i), unimodular prefactor
      Complex z0 = -kI / Complex{2, -1};
      Complex lam = (1.0 - z0) / (1.0 - std::conj(z0));  // fixes g(1) = 1
      return {lam, {z0}};
    }
    case MapKind::BlaschkeFinite:
      return {g.rotation, g.zeros};
    default:
      throw ConfigError("InvalidParam", "map '" + g.name + "' is not an inner kind");
  }
}

Complex factors_eval(const Factors& f, Complex z) {
  Complex w = f.rotation;
  for (const Complex& zk : f.zeros) w *= (z - zk) / (1.0 - std::conj(zk) * z);
  return w;
}

// (1 - |B(w)|^2) = (1 - |w|^2) * lambda(w); the multiplicative radial factor
double radial_factor(const Factors& f, Complex w) {
  double lambda = 0;
  double prefix = 1.0;  // prod over earlier factors of |b_j(w)|^2
  for (const Complex& zk : f.zeros) {
    Complex den = 1.0 - std::conj(zk) * w;
    double d2 = std::norm(den);
    lambda += prefix * (1.0 - std::norm(zk)) / d2;
    prefix *= std::norm(w - zk) / d2;
  }
  return lambda;
}

// ---- rational form and fixed points ---------------------------------------

using Poly = std::vector<Complex>;  // ascending coefficients

Complex poly_eval(const Poly& p, Complex z) {
  Complex acc{0, 0};
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
  return acc;
}

Poly poly_derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(static_cast<double>(i) * p[i]);
  if (d.empty()) d.push_back({0, 0});
  return d;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, Complex{0, 0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

struct Rational {
  Poly P, Q;
};

Rational rational_form(const Factors& f) {
  Poly P{f.rotation}, Q{Complex{1, 0}};
  for (const Complex& zk : f.zeros) {
    P = poly_mul(P, Poly{-zk, Complex{1, 0}});
    Q = poly_mul(Q, Poly{Complex{1, 0}, -std::conj(zk)});
  }
  return {P, Q};
}

Complex rational_first(const Rational& r, Complex z) {
  Poly Pp = poly_derivative(r.P), Qp = poly_derivative(r.Q);
  Complex q = poly_eval(r.Q, z);
  return (poly_eval(Pp, z) * q - poly_eval(r.P, z) * poly_eval(Qp, z)) / (q * q);
}

Complex rational_second(const Rational& r, Complex z) {
  Poly Pp = poly_derivative(r.P), Qp = poly_derivative(r.Q);
  Poly Ppp = poly_derivative(Pp), Qpp = poly_derivative(Qp);
  Complex q = poly_eval(r.Q, z), qp = poly_eval(Qp, z);
  Complex n1 = poly_eval(Pp, z) * q - poly_eval(r.P, z) * qp;
  Complex n1p = poly_eval(Ppp, z) * q - poly_eval(r.P, z) * poly_eval(Qpp, z);
  return (n1p * q - 2.0 * n1 * qp) / (q * q * q);
}

std::vector<Complex> durand_kerner(Poly p) {
  while (p.size() > 1 && std::abs(p.back()) < 1e-300) p.pop_back();
  int deg = static_cast<int>(p.size()) - 1;
  if (deg < 1) return {};
  for (auto& c : p) c /= p.back();
  std::vector<Complex> roots(deg);
  Complex seed = std::polar(1.0, 0.7);  // not a root of unity
  Complex acc{0.4, 0.9};
  for (int i = 0; i < deg; ++i) {
    roots[i] = acc;
    acc *= seed * 1.03;
  }
  for (int iter = 0; iter < 500; ++iter) {
    double move = 0;
    for (int i = 0; i < deg; ++i) {
      Complex num = poly_eval(p, roots[i]);
      Complex den{1, 0};
      for (int j = 0; j < deg; ++j)
        if (j != i) den *= roots[i] - roots[j];
      if (std::abs(den) < 1e-300) den = 1e-300;
      Complex delta = num / den;
      roots[i] -= delta;
      move = std::max(move, std::abs(delta));
    }
    if (move < 1e-14) break;
  }
  return roots;
}

struct Cluster {
  Complex mean{0, 0};
  int size = 0;
};

std::vector<Cluster> cluster_roots(const std::vector<Complex>& roots, double tol) {
  std::vector<Cluster> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    Complex sum = roots[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) < tol) {
        used[j] = true;
        sum += roots[j];
        ++count;
      }
    }
    out.push_back({sum / static_cast<double>(count), count});
  }
  return out;
}

struct DwCore {
  Complex p;
  double q_der;
  Multiplicity mult;
  double gprime_dist_to_1;
  double gsecond_abs;
  int cluster_size;
};

DwCore dw_core(const MapSpec& g) {
  Factors f = blaschke_factors(g);
  Rational rat = rational_form(f);
  // fixed points: P(z) - z Q(z) = 0
  Poly fp = rat.P;
  Poly zq = poly_mul(Poly{Complex{0, 0}, Complex{1, 0}}, rat.Q);
  fp.resize(std::max(fp.size(), zq.size()), Complex{0, 0});
  for (std::size_t i = 0; i < zq.size(); ++i) fp[i] -= zq[i];
  auto clusters = cluster_roots(durand_kerner(fp), 1e-4);

  for (const auto& c : clusters)
    if (std::abs(c.mean) < 1.0 - 1e-6)
      throw ComputeError("InteriorFixedPoint",
                         "inner map has a fixed point inside the disc; no boundary Denjoy-Wolff point");

  const Cluster* chosen = nullptr;
  for (const auto& c : clusters) {
    if (std::abs(std::abs(c.mean) - 1.0) > 1e-3) continue;
    if (c.size >= 2) {
      chosen = &c;
      break;
    }
    Complex p = c.mean / std::abs(c.mean);
    if (std::abs(rational_first(rat, p)) <= 1.0 + 1e-9) {
      chosen = &c;
      break;
    }
  }
  if (!chosen)
    throw ComputeError("NoConvergence", "no non-repelling boundary fixed point found");

  DwCore out;
  out.p = chosen->mean / std::abs(chosen->mean);
  out.cluster_size = chosen->size;
  Complex g1 = rational_first(rat, out.p);
  Complex g2 = rational_second(rat, out.p);
  out.q_der = std::abs(g1);
  out.gprime_dist_to_1 = std::abs(g1 - 1.0);
  out.gsecond_abs = std::abs(g2);
  if (out.gprime_dist_to_1 < kParabolicTol) {
    out.mult = out.gsecond_abs < kParabolic3Tol ? Multiplicity::Parabolic3 : Multiplicity::Parabolic2;
  } else if (out.q_der < 1.0) {
    out.mult = Multiplicity::Attracting;
  } else {
    out.mult = Multiplicity::Unknown;
  }
  return out;
}

}  // namespace

std::vector<double> radial_log_decay(const MapSpec& g, Complex w0, long N) {
  Factors f = blaschke_factors(g);
  std::vector<double> ln_a;
  ln_a.reserve(static_cast<std::size_t>(N));
  Complex w = w0;
  double ln_t = std::log1p(-std::norm(w0));  // t = 1 - |w|^2
  double running = 1.0;
  for (long n = 1; n <= N; ++n) {
    running *= radial_factor(f, w);
    if (running < 1e-280 || running > 1e280) {
      ln_t += std::log(running);
      running = 1.0;
    }
    w = factors_eval(f, w);
    double aw = std::abs(w);
    if (aw > 1.0) w /= aw;
    double lt = ln_t + std::log(running);
    ln_a.push_back(lt - std::log1p(std::min(aw, 1.0)));
  }
  return ln_a;
}

DenjoyWolffData find_denjoy_wolff(const MapSpec& g, Complex w0, long budget) {
  if (std::abs(w0) >= 1.0)
    throw ConfigError("InvalidParam", "find_denjoy_wolff: w0 must lie inside the disc");
  DwCore core = dw_core(g);

  DenjoyWolffData dw;
  dw.p = core.p;
  dw.q_derivative = core.q_der;
  dw.multiplicity = core.mult;
  dw.gprime_dist_to_1 = core.gprime_dist_to_1;
  dw.gsecond_abs = core.gsecond_abs;
  dw.fixed_point_cluster = core.cluster_size;

  // n-th-root estimator, iteration count doubled until two consecutive
  // checkpoints agree. The radial factor recurrence keeps ln a_n exact long
  // after 1-|w| would round to zero.
  Factors f = blaschke_factors(g);
  Complex w = w0;
  double ln_t = std::log1p(-std::norm(w0));
  double running = 1.0;
  long n = 0;
  long checkpoint = std::min<long>(1024, std::max<long>(budget, 2));
  double q_prev = -1.0, q_cur = 0.0;
  long n_used = 0;
  while (n < budget) {
    running *= radial_factor(f, w);
    if (running < 1e-280 || running > 1e280) {
      ln_t += std::log(running);
      running = 1.0;
    }
    w = factors_eval(f, w);
    double aw = std::abs(w);
    if (aw > 1.0) {
      w /= aw;
      aw = 1.0;
    }
    ++n;
    if (n == checkpoint || n == budget) {
      double ln_a = ln_t + std::log(running) - std::log1p(aw);
      q_cur = std::exp(ln_a / static_cast<double>(n));
      n_used = n;
      if (q_prev >= 0 && std::abs(q_cur - q_prev) < 2.5e-7) break;
      q_prev = q_cur;
      checkpoint = std::min(budget, checkpoint * 2);
    }
  }
  dw.q_root = q_cur;
  dw.q_root_n = n_used;
  dw.q_agreement = std::abs(dw.q_root - dw.q_derivative);

  // orbit direction must agree with the chosen fixed point
  if (std::abs(w) > 0.5 && std::abs(w / std::abs(w) - dw.p) > 0.2)
    throw ComputeError("NoConvergence",
                       "orbit direction does not converge to the computed Denjoy-Wolff point");
  return dw;
}

double circle_derivative(const MapSpec& g, double theta) {
  Factors f = blaschke_factors(g);
  Complex zeta = std::polar(1.0, theta);
  double d = 0;
  for (const Complex& zk : f.zeros) d += (1.0 - std::norm(zk)) / std::norm(zeta - zk);
  return d;
}

namespace {

// one circle step in double-double, returns the new point on the circle
DDComplex dd_circle_step(const Factors& f, const DDComplex& z) {
  DDComplex w{DD(f.rotation.real()), DD(f.rotation.imag())};
  for (const Complex& zk : f.zeros) {
    DDComplex num = z - DDComplex{zk.real(), zk.imag()};
    DDComplex ck{DD(zk.real()), DD(-zk.imag())};  // conj(zk)
    DDComplex den = DDComplex{DD(1.0), DD(0.0)} - ck * z;
    w = w * (num / den);
  }
  return dd_normalize(w);
}

}  // namespace

BoundaryOrbit boundary_orbit(const MapSpec& g, double theta0, long N, Precision precision) {
  Factors f = blaschke_factors(g);
  BoundaryOrbit out;
  out.theta.reserve(static_cast<std::size_t>(N) + 1);
  out.theta.push_back(normalize_angle(theta0));

  // Lyapunov proxy: running product of the circle-map derivative. The budget
  // is the amplification at which eps-scale input noise reaches 1e-6 radians.
  const double budget = precision == Precision::Extended ? 1e-6 / 4.93e-32 : 1e-6 / 0x1.0p-52;
  double product = 1.0;

  if (precision == Precision::Double) {
    Complex z = std::polar(1.0, out.theta[0]);
    for (long n = 0; n < N; ++n) {
      product *= circle_derivative(g, std::arg(z));
      if (product > budget) {
        out.precision_loss = true;
        break;
      }
      z = factors_eval(f, z);
      z /= std::abs(z);
      out.theta.push_back(normalize_angle(std::arg(z)));
    }
  } else {
    DDComplex z{std::cos(out.theta[0]), std::sin(out.theta[0])};
    for (long n = 0; n < N; ++n) {
      double theta = std::atan2(z.im.value(), z.re.value());
      product *= circle_derivative(g, theta);
      if (product > budget) {
        out.precision_loss = true;
        break;
      }
      z = dd_circle_step(f, z);
      out.theta.push_back(normalize_angle(std::atan2(z.im.value(), z.re.value())));
    }
  }
  out.valid_count = static_cast<long>(out.theta.size());
  return out;
}

CircleArc CircleArc::from_endpoints(double a, double b) {
  CircleArc arc;
  arc.start = normalize_angle(a);
  double len = normalize_angle(b - a);
  arc.length = len == 0 ? kTwoPi : len;
  return arc;
}

bool CircleArc::contains(double theta) const {
  if (length >= kTwoPi) return true;
  double rel = normalize_angle(theta - start);
  return rel < length;
}

MuPValue mu_p(const CircleArc& arc, Complex p) {
  double phi = std::arg(p);
  double u0 = normalize_angle(arc.start - phi);
  double u1 = u0 + arc.length;
  MuPValue out;
  if (u0 <= 0 || u1 >= kTwoPi) {
    out.infinite = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  // |e^{i theta} - p|^2 = 4 sin^2((theta - arg p)/2); antiderivative -cot(u/2)/2
  double c0 = 1.0 / std::tan(u0 / 2.0);
  double c1 = 1.0 / std::tan(u1 / 2.0);
  out.value = (c0 - c1) / (2.0 * kTwoPi);
  out.quad_error = 8.0 * 0x1.0p-52 * (std::abs(c0) + std::abs(c1)) / (2.0 * kTwoPi);
  return out;
}

namespace {

// monotone lift of theta -> arg g(e^{i theta}) with psi(theta + 2pi) = psi(theta) + 2pi d
struct CircleLift {
  const Factors* f;
  std::vector<double> grid_theta;
  std::vector<double> grid_psi;
  std::vector<double> grid_raw;
  int degree;

  static double wrap_pm_pi(double x) {
    double t = std::fmod(x + kPi, kTwoPi);
    if (t < 0) t += kTwoPi;
    return t - kPi;
  }

  explicit CircleLift(const Factors& factors, int deg) : f(&factors), degree(deg) {
    double dmax = 0;
    for (const Complex& zk : f->zeros)
      dmax += (1.0 + std::abs(zk)) / (1.0 - std::abs(zk));
    std::size_t m = 4096;
    while (m < 8.0 * dmax) m *= 2;
    grid_theta.resize(m + 1);
    grid_psi.resize(m + 1);
    grid_raw.resize(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
      double th = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
      grid_theta[j] = th;
      grid_raw[j] = std::arg(factors_eval(*f, std::polar(1.0, th)));
      if (j == 0) {
        grid_psi[j] = grid_raw[j];
      } else {
        grid_psi[j] = grid_psi[j - 1] + wrap_pm_pi(grid_raw[j] - grid_raw[j - 1]);
      }
    }
    if (std::abs(grid_psi[m] - grid_psi[0] - kTwoPi * degree) > 0.1)
      throw ComputeError("RootSolveFailure", "circle-map winding does not match the Blaschke degree");
  }

  double psi0() const { return grid_psi[0]; }

  // solve psi(theta) = target for target in [psi0, psi0 + 2 pi d)
  double invert(double target) const {
    std::size_t lo = 0, hi = grid_psi.size() - 1;
    if (target <= grid_psi[0]) return grid_theta[0];
    if (target >= grid_psi[hi]) return grid_theta[hi];
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (grid_psi[mid] <= target) lo = mid;
      else hi = mid;
    }
    double tlo = grid_theta[lo], thi = grid_theta[hi];
    double plo = grid_psi[lo], raw_lo = grid_raw[lo];
    for (int it = 0; it < 80 && thi - tlo > 1e-15; ++it) {
      double tm = 0.5 * (tlo + thi);
      double raw = std::arg(factors_eval(*f, std::polar(1.0, tm)));
      double pm = plo + wrap_pm_pi(raw - raw_lo);
      if (pm <= target) {
        tlo = tm;
        plo = pm;
        raw_lo = raw;
      } else {
        thi = tm;
      }
    }
    return 0.5 * (tlo + thi);
  }
};

}  // namespace

std::vector<CircleArc> preimage_arcs(const MapSpec& g, const CircleArc& arc) {
  Factors f = blaschke_factors(g);
  int d = g.degree();
  if (d < 1) throw ConfigError("InvalidParam", "preimage_arcs: map must have finite degree >= 1");
  if (arc.length >= kTwoPi) return {CircleArc{0.0, kTwoPi}};

  if (d == 1) {
    // exact Moebius inverse: z = (d w - b)/(a - c w) for (az + b)/(cz + d)
    Rational rat = rational_form(f);
    Complex a = rat.P.size() > 1 ? rat.P[1] : Complex{0, 0};
    Complex b = rat.P[0];
    Complex c = rat.Q.size() > 1 ? rat.Q[1] : Complex{0, 0};
    Complex dd = rat.Q[0];
    auto inv = [&](double theta) {
      Complex w = std::polar(1.0, theta);
      return std::arg((dd * w - b) / (a - c * w));
    };
    double s = inv(arc.start);
    double e = inv(arc.start + arc.length);
    return {CircleArc::from_endpoints(s, e)};
  }

  CircleLift lift(f, d);
  double base = lift.psi0();
  double a0 = base + normalize_angle(arc.start - base);
  std::vector<CircleArc> out;
  for (int k = 0; k < d; ++k) {
    double ts = a0 + kTwoPi * k;
    double te = ts + arc.length;
    double span = kTwoPi * d;
    double th_s, th_e;
    if (ts >= base + span) {
      th_s = lift.invert(ts - span);
    } else {
      th_s = lift.invert(ts);
    }
    if (te >= base + span) {
      th_e = lift.invert(te - span);
    } else {
      th_e = lift.invert(te);
    }
    out.push_back(CircleArc::from_endpoints(th_s, th_e));
  }
  return out;
}

MuInvarianceResult check_mu_invariance(const MapSpec& g, const CircleArc& arc) {
  DwCore core = dw_core(g);
  MuInvarianceResult res;
  res.q = core.q_der;
  MuPValue base = mu_p(arc, core.p);
  if (base.infinite)
    throw ComputeError("InfiniteMass", "check_mu_invariance: arc closure contains p");
  res.rhs = res.q * base.value;
  res.lhs = 0;
  for (const CircleArc& pre : preimage_arcs(g, arc)) {
    MuPValue v = mu_p(pre, core.p);
    if (v.infinite)
      throw ComputeError("InfiniteMass", "check_mu_invariance: preimage arc touches p");
    res.lhs += v.value;
  }
  double scale = std::max(std::max(std::abs(res.lhs), std::abs(res.rhs)), 1e-30);
  res.rel_err = std::abs(res.lhs - res.rhs) / scale;
  return res;
}

RecurrenceResult recurrence_stats(const MapSpec& g, const CircleArc& target, long n_samples,
                                  long budget, long min_returns, uint64_t seed, int threads,
                                  Precision precision) {
  Factors f = blaschke_factors(g);
  std::vector<char> recurrent(n_samples, 0);
  std::vector<char> lost(n_samples, 0);
  const double lyap_budget = precision == Precision::Extended ? 1e-6 / 4.93e-32 : 1e-6 / 0x1.0p-52;

  parallel_for(n_samples, threads, [&](long i) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(i));
    double theta0 = rng.angle();
    long count = target.contains(theta0) ? 1 : 0;
    double product = 1.0;
    if (precision == Precision::Double) {
      Complex z = std::polar(1.0, theta0);
      for (long n = 0; n < budget && count < min_returns; ++n) {
        product *= circle_derivative(g, std::arg(z));
        if (product > lyap_budget) {
          lost[i] = 1;
          product = 1.0;  // keep iterating; statistics remain meaningful
        }
        z = factors_eval(f, z);
        z /= std::abs(z);
        if (target.contains(normalize_angle(std::arg(z)))) ++count;
      }
    } else {
      DDComplex z{std::cos(theta0), std::sin(theta0)};
      for (long n = 0; n < budget && count < min_returns; ++n) {
        double th = std::atan2(z.im.value(), z.re.value());
        product *= circle_derivative(g, th);
        if (product > lyap_budget) {
          lost[i] = 1;
          product = 1.0;
        }
        z = dd_circle_step(f, z);
        if (target.contains(normalize_angle(std::atan2(z.im.value(), z.re.value())))) ++count;
      }
    }
    recurrent[i] = count >= min_returns ? 1 : 0;
  });

  RecurrenceResult out;
  out.n_samples = n_samples;
  for (long i = 0; i < n_samples; ++i) {
    out.recurrent_count += recurrent[i];
    out.precision_loss_ratio += lost[i];
  }
  out.fraction = n_samples > 0 ? static_cast<double>(out.recurrent_count) / n_samples : 0;
  out.precision_loss_ratio = n_samples > 0 ? out.precision_loss_ratio / n_samples : 0;
  return out;
}

}  // namespace bakerlab

#include "bakerlab/harmonic.hpp"

#include <cmath>

#include "bakerlab/errors.hpp"
#include "bakerlab/parallel.hpp"
#include "bakerlab/rng.hpp"

namespace bakerlab {

const char* to_string(FateKind f) {
  switch (f) {
    case FateKind::Escaping: return "escaping";
    case FateKind::Recurrent: return "recurrent";
    case FateKind::PoleHit: return "pole_hit";
    case FateKind::Undefined: return "undefined";
  }
  return "undefined";
}

Membership membership(const OracleDomain& od, Complex z) {
  if (od.in_entry(z)) return Membership::InU;
  Complex w = z;
  for (long n = 0; n < od.budget; ++n) {
    EvalResult r = eval(od.map, w, od.pole_eps_scale);
    if (r.status == EvalStatus::Pole) return Membership::NotInU;
    if (r.status != EvalStatus::Ok) return Membership::NotInU;
    w = r.value;
    if (od.in_entry(w)) return Membership::InU;
    if (std::abs(w) > od.big_radius) return Membership::NotInU;
  }
  return Membership::Unknown;
}

void validate_oracle_domain(const OracleDomain& od, uint64_t seed, int samples) {
  double span = std::min(od.strip_halfwidth, 50.0);
  for (int i = 0; i < samples; ++i) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(i));
    double along = od.strip_center + rng.uniform(-span, span) * 0.98;
    double height = od.entry.offset + rng.u01() * 50.0 + 1e-6;
    Complex z = od.entry.direction * Complex{height, along};
    if (!od.in_entry(z)) continue;
    EvalResult r = eval(od.map, z, od.pole_eps_scale);
    if (r.status != EvalStatus::Ok || !od.in_entry(r.value))
      throw ComputeError("InvalidDomain",
                         "oracle entry region is not forward-invariant at the sampled points", i);
  }
}

HarmonicSample wos_walk(const DistEstimator& dist_lower, Complex basepoint, double eps_boundary,
                        Rng& rng, long max_steps) {
  HarmonicSample s;
  Complex z = basepoint;
  for (long n = 0; n < max_steps; ++n) {
    double radius = dist_lower(z);
    if (radius < eps_boundary) {
      s.boundary_point = z;
      s.walk_steps = n;
      s.terminal_radius = radius;
      return s;
    }
    z += std::polar(radius, rng.angle());
  }
  s.boundary_point = z;
  s.walk_steps = max_steps;
  s.terminal_radius = dist_lower(z);
  s.stuck = true;
  return s;
}

namespace {

// conservative boundary-distance estimate from the membership oracle:
// half the smallest exit distance over a fan of rays
double oracle_distance(const OracleDomain& od, Complex z, double floor_scale) {
  double dmin = od.big_radius;
  for (int k = 0; k < 16; ++k) {
    double phi = (k + 0.5) * kTwoPi / 16.0;
    Complex dir = std::polar(1.0, phi);
    double hi = std::max(floor_scale, 1e-3);
    double lo = 0;
    int grow = 0;
    while (membership(od, z + hi * dir) == Membership::InU) {
      lo = hi;
      hi *= 2.0;
      if (++grow > 60 || hi > 2.0 * od.big_radius) break;
    }
    if (lo == hi || grow > 60 || hi > 2.0 * od.big_radius) {
      dmin = std::min(dmin, hi);
      continue;
    }
    for (int it = 0; it < 14 && hi - lo > 1e-4 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      if (membership(od, z + mid * dir) == Membership::InU) lo = mid;
      else hi = mid;
    }
    dmin = std::min(dmin, lo);
  }
  return 0.5 * dmin;
}

Complex halfplane_boundary_sample(const HalfPlane& h, Complex basepoint, Rng& rng) {
  Complex w = h.to_standard(basepoint);
  if (w.real() <= 0)
    throw ComputeError("DomainViolation", "basepoint not inside the half-plane");
  double t = w.imag() + w.real() * rng.cauchy();
  return (Complex{0.0, t} + h.offset) * h.direction;
}

Complex disc_boundary_sample(Complex basepoint, Rng& rng) {
  if (std::abs(basepoint) >= 1.0)
    throw ComputeError("DomainViolation", "basepoint not inside the unit disc");
  Complex zeta = std::polar(1.0, rng.angle());
  return (zeta + basepoint) / (1.0 + std::conj(basepoint) * zeta);
}

}  // namespace

HarmonicSample wos_sample(const DomainModel& domain, Complex basepoint, double eps_boundary,
                          uint64_t seed) {
  Rng rng(seed);
  rng.next();
  switch (domain.kind) {
    case DomainModel::Kind::UnitDisc: {
      HarmonicSample s;
      s.boundary_point = disc_boundary_sample(basepoint, rng);
      return s;
    }
    case DomainModel::Kind::HalfPlane: {
      HarmonicSample s;
      s.boundary_point = halfplane_boundary_sample(domain.half, basepoint, rng);
      return s;
    }
    case DomainModel::Kind::Oracle: {
      const OracleDomain& od = *domain.oracle;
      if (membership(od, basepoint) != Membership::InU)
        throw ComputeError("DomainViolation", "basepoint not recognised as a point of the domain");
      double last_radius = 1.0;
      DistEstimator est = [&](Complex z) {
        double d = oracle_distance(od, z, 0.25 * last_radius);
        last_radius = std::max(d, 1e-12);
        return d;
      };
      return wos_walk(est, basepoint, eps_boundary, rng);
    }
  }
  return {};
}

namespace {

// fate of a real-line start under a real-coefficient map; the boundary
// dynamics itself is exact, orbits are pseudo-orbits past the Lyapunov
// horizon as usual for chaotic statistics
Fate real_line_fate(const MapSpec& map, double x0, const FateOptions& opt) {
  Fate fate;
  const double phase_loss = 4.5e15;  // ulp(x) exceeds pi/4: tan phase meaningless
  const bool tan_fast = map.kind == MapKind::Tan;
  double x = x0;
  long returns = opt.target.contains(Complex{x, 0}) ? 1 : 0;
  int consec = 0;
  for (long n = 0; n < opt.iter_budget; ++n) {
    if (tan_fast) {
      double k = std::round(x / kPi - 0.5);
      double pole_dist = std::abs(x - (k + 0.5) * kPi);
      if (pole_dist < opt.pole_eps_scale * (1.0 + std::abs(x))) {
        fate.kind = FateKind::PoleHit;
        fate.steps = n;
        fate.returns = returns;
        return fate;
      }
      x = x + std::tan(x);
    } else {
      EvalResult r = eval(map, Complex{x, 0.0}, opt.pole_eps_scale);
      if (r.status == EvalStatus::Pole) {
        fate.kind = FateKind::PoleHit;
        fate.steps = n;
        fate.returns = returns;
        return fate;
      }
      if (r.status != EvalStatus::Ok) {
        fate.kind = std::abs(x) > opt.escape_radius ? FateKind::Escaping : FateKind::Undefined;
        fate.steps = n;
        fate.returns = returns;
        return fate;
      }
      x = r.value.real();
    }
    fate.steps = n + 1;
    if (std::abs(x) > phase_loss) {
      fate.precision_flag = true;
      fate.kind = FateKind::Undefined;
      fate.returns = returns;
      return fate;
    }
    if (opt.target.contains(Complex{x, 0})) {
      if (++returns >= opt.min_returns) {
        fate.kind = FateKind::Recurrent;
        fate.returns = returns;
        return fate;
      }
    }
    if (std::abs(x) > opt.escape_radius) {
      if (++consec >= opt.confirm_window) {
        fate.kind = FateKind::Escaping;
        fate.returns = returns;
        return fate;
      }
    } else {
      consec = 0;
    }
  }
  fate.kind = FateKind::Undefined;
  fate.returns = returns;
  return fate;
}

}  // namespace

Fate boundary_fate(const MapSpec& map, Complex x0, const FateOptions& opt) {
  if (map.real_coefficients() && x0.imag() == 0.0) return real_line_fate(map, x0.real(), opt);

  Fate fate;
  Complex z = x0;
  long returns = opt.target.contains(z) ? 1 : 0;
  int consec = 0;
  double cond = 1.0;
  const double eps = 0x1.0p-52;
  for (long n = 0; n < opt.iter_budget; ++n) {
    EvalResult r = eval(map, z, opt.pole_eps_scale);
    if (r.status == EvalStatus::Pole) {
      fate.kind = FateKind::PoleHit;
      fate.steps = n;
      fate.returns = returns;
      return fate;
    }
    if (r.status != EvalStatus::Ok) {
      fate.kind = std::abs(z) > opt.escape_radius ? FateKind::Escaping : FateKind::Undefined;
      fate.steps = n;
      fate.returns = returns;
      return fate;
    }
    double az = std::abs(z), aw = std::abs(r.value);
    if (aw > 0) cond = cond * std::max(1.0, std::abs(derivative(map, z)) * az / aw) + 1.0;
    z = r.value;
    fate.steps = n + 1;
    if (cond * eps > 1e-6) {
      fate.precision_flag = true;
      fate.kind = FateKind::Undefined;
      fate.returns = returns;
      return fate;
    }
    if (opt.target.contains(z)) {
      if (++returns >= opt.min_returns) {
        fate.kind = FateKind::Recurrent;
        fate.returns = returns;
        return fate;
      }
    }
    if (std::abs(z) > opt.escape_radius) {
      if (++consec >= opt.confirm_window) {
        fate.kind = FateKind::Escaping;
        fate.returns = returns;
        return fate;
      }
    } else {
      consec = 0;
    }
  }
  fate.kind = FateKind::Undefined;
  fate.returns = returns;
  return fate;
}

FateReport dichotomy_experiment(const MapSpec& map, const DomainModel& domain, Complex basepoint,
                                long n_samples, const FateOptions& opt, uint64_t seed,
                                int threads) {
  if (domain.kind == DomainModel::Kind::Oracle) {
    validate_oracle_domain(*domain.oracle, seed ^ 0xA5A5A5A5, 32);
    if (membership(*domain.oracle, basepoint) != Membership::InU)
      throw ComputeError("DomainViolation", "basepoint not recognised as a point of the domain");
  }
  FateReport rep;
  rep.n_samples = n_samples;
  rep.params = opt;
  rep.seed = seed;
  rep.rows.resize(n_samples);

  parallel_for(n_samples, threads, [&](long i) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(i));
    FateSampleRow& row = rep.rows[i];
    row.sample_id = i;
    Complex pt;
    bool stuck = false;
    switch (domain.kind) {
      case DomainModel::Kind::UnitDisc:
        pt = disc_boundary_sample(basepoint, rng);
        break;
      case DomainModel::Kind::HalfPlane:
        pt = halfplane_boundary_sample(domain.half, basepoint, rng);
        break;
      case DomainModel::Kind::Oracle: {
        HarmonicSample s = wos_sample(domain, basepoint, opt.eps_boundary, rng.next());
        pt = s.boundary_point;
        stuck = s.stuck;
        break;
      }
    }
    row.boundary_point = pt;
    if (stuck) {
      row.fate = FateKind::Undefined;
      return;
    }
    Fate f = boundary_fate(map, pt, opt);
    row.fate = f.kind;
    row.returns = f.returns;
    row.steps = f.steps;
  });

  for (const auto& row : rep.rows) {
    switch (row.fate) {
      case FateKind::Escaping: ++rep.escaping; break;
      case FateKind::Recurrent: ++rep.recurrent; break;
      case FateKind::PoleHit: ++rep.pole_hit; break;
      case FateKind::Undefined: ++rep.undefined; break;
    }
  }
  return rep;
}

}  // namespace bakerlab

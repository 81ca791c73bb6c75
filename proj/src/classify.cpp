#include "bakerlab/classify.hpp"

#include <algorithm>
#include <cmath>

#include "bakerlab/errors.hpp"
#include "bakerlab/parallel.hpp"

namespace bakerlab {

const char* to_string(BakerVerdict v) {
  switch (v) {
    case BakerVerdict::Hyperbolic: return "hyperbolic";
    case BakerVerdict::SimplyParabolic: return "simply_parabolic";
    case BakerVerdict::DoublyParabolic: return "doubly_parabolic";
    case BakerVerdict::HyperbolicOrSimplyParabolic: return "hyperbolic_or_simply_parabolic";
    case BakerVerdict::Unresolved: return "unresolved";
  }
  return "unresolved";
}

const char* to_string(AaronsonVerdict v) {
  switch (v) {
    case AaronsonVerdict::ConvergesAEConvergence: return "converges_ae_convergence";
    case AaronsonVerdict::DivergesConservative: return "diverges_conservative";
    case AaronsonVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

const char* to_string(RipponStallardResult::SqrtSum v) {
  switch (v) {
    case RipponStallardResult::SqrtSum::Finite: return "finite";
    case RipponStallardResult::SqrtSum::Divergent: return "divergent";
    case RipponStallardResult::SqrtSum::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

double tail_median(const std::vector<double>& v, std::size_t tail) {
  std::size_t n = v.size();
  tail = std::min(std::max<std::size_t>(tail, 1), n);
  std::vector<double> t(v.end() - tail, v.end());
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

// log-log fit of the tail half of d_n against the index
LinearFit loglog_tail_fit(const std::vector<double>& d, long n_offset) {
  std::vector<double> xs, ys;
  std::size_t lo = d.size() / 2;
  for (std::size_t i = lo; i < d.size(); ++i) {
    double n = static_cast<double>(n_offset + static_cast<long>(i));
    if (n < 1 || d[i] <= 0) continue;
    xs.push_back(std::log(n));
    ys.push_back(std::log(d[i]));
  }
  return linear_fit(xs, ys);
}

}  // namespace

BakerClassification classify_inner(const DenjoyWolffData& dw, const StepSequence& steps) {
  if (steps.d.size() < 64)
    throw ComputeError("InsufficientData", "classify_inner: need at least 64 step distances");
  BakerClassification out;
  out.q_est = dw.q_derivative;
  LinearFit fit = loglog_tail_fit(steps.d, steps.n_offset);
  out.fit_slope = fit.slope;
  out.fit_r2 = fit.r2;
  double b = tail_median(steps.d, steps.d.size() / 10 + 1);
  out.b_est = b;
  bool to_zero = fit.slope < out.thresholds.slope_max && fit.r2 > out.thresholds.r2_min;
  bool bounded_below = !to_zero && b > 1e-9;

  if (dw.q_derivative < 1.0 - out.thresholds.q_tol) {
    if (to_zero) {
      out.verdict = BakerVerdict::Unresolved;
      out.note = "q indicates hyperbolic but step distances trend to zero";
    } else {
      out.verdict = BakerVerdict::Hyperbolic;
    }
    return out;
  }
  switch (dw.multiplicity) {
    case Multiplicity::Parabolic3:
      if (to_zero) {
        out.verdict = BakerVerdict::DoublyParabolic;
      } else {
        out.verdict = BakerVerdict::Unresolved;
        out.note = "multiplicity 3 but step distances do not trend to zero";
      }
      break;
    case Multiplicity::Parabolic2:
      if (bounded_below) {
        out.verdict = BakerVerdict::SimplyParabolic;
      } else {
        out.verdict = BakerVerdict::Unresolved;
        out.note = "multiplicity 2 but step distances trend to zero";
      }
      break;
    default:
      out.verdict = BakerVerdict::Unresolved;
      out.note = "q = 1 with unresolved multiplicity";
  }
  return out;
}

BakerClassification classify_plane(const MapSpec& map, Complex z0, const MetricModel& metric,
                                   long N) {
  if (N < 64) throw ComputeError("InsufficientData", "classify_plane: need N >= 64");
  BakerClassification out;

  if (!metric.contains(z0))
    throw ComputeError("OrbitLeftDomain", "classify_plane: z0 outside the metric model domain", 0);
  std::vector<double> d, ratio, proxy;
  d.reserve(N);
  Complex z = z0;
  for (long n = 0; n < N; ++n) {
    EvalResult r = eval(map, z);
    if (r.status == EvalStatus::Pole)
      throw ComputeError("PoleSignal", "classify_plane: orbit hit a pole", n);
    if (r.status != EvalStatus::Ok)
      throw ComputeError("Overflow", "classify_plane: orbit evaluation failed", n);
    if (!metric.contains(r.value))
      throw ComputeError("OrbitLeftDomain", "classify_plane: orbit left the model domain", n + 1);
    d.push_back(metric.distance(r.value, z));
    if (std::abs(z) > 0) ratio.push_back(std::abs(r.value) / std::abs(z));
    double dist = metric.kind == MetricModel::Kind::HalfPlane ? metric.half.signed_dist(z)
                  : metric.kind == MetricModel::Kind::Disc    ? 1.0 - std::abs(z)
                                                              : metric.dist_lower(z);
    if (dist > 0) proxy.push_back(std::abs(r.value - z) / dist);
    z = r.value;
  }

  LinearFit fit = loglog_tail_fit(d, 0);
  out.fit_slope = fit.slope;
  out.fit_r2 = fit.r2;
  out.b_est = tail_median(d, d.size() / 10 + 1);
  out.ratio_limit = tail_median(ratio, ratio.size() / 10 + 1);
  double proxy_tail = tail_median(proxy, proxy.size() / 10 + 1);

  bool to_zero = fit.slope < out.thresholds.slope_max && fit.r2 > out.thresholds.r2_min;
  if (to_zero) {
    // valid for exact metrics and for upper bounds alike
    out.verdict = BakerVerdict::DoublyParabolic;
    return out;
  }
  bool not_doubly;
  if (metric.is_upper_bound()) {
    // an upper bound staying positive proves nothing by itself
    not_doubly = proxy_tail > out.thresholds.proxy_min;
    if (!not_doubly) {
      out.verdict = BakerVerdict::Unresolved;
      out.note = "upper-bound metric: steps not decreasing but distance-ratio proxy is small";
      return out;
    }
  } else {
    not_doubly = *out.b_est > 1e-9 || proxy_tail > out.thresholds.proxy_min;
    if (!not_doubly) {
      out.verdict = BakerVerdict::Unresolved;
      return out;
    }
  }
  if (out.ratio_limit && *out.ratio_limit > 1.0 + out.thresholds.ratio_tol) {
    out.verdict = BakerVerdict::Hyperbolic;
  } else {
    out.verdict = BakerVerdict::HyperbolicOrSimplyParabolic;
  }
  return out;
}

SeriesSample radial_series(const MapSpec& g, Complex w0, long N) {
  std::vector<double> ln = radial_log_decay(g, w0, N);
  SeriesSample s;
  s.n_offset = 1;
  for (double la : ln) {
    double a = std::exp(la);
    if (a <= 0) break;  // underflow floor; keep the positive prefix
    s.a.push_back(a);
  }
  return s;
}

AaronsonVerdict aaronson_verdict(const SeriesSample& sample, AaronsonEvidence* evidence) {
  AaronsonEvidence ev;
  const auto& a = sample.a;
  if (a.size() < 64) {
    if (evidence) {
      ev.route = "sample too short";
      *evidence = ev;
    }
    return AaronsonVerdict::Inconclusive;
  }
  long n_end = sample.n_offset + static_cast<long>(a.size()) - 1;
  ev.q_est = std::exp(std::log(a.back()) / static_cast<double>(n_end));

  std::size_t half = a.size() / 2;
  double rmax = 0, raabe_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = half; i + 1 < a.size(); ++i) {
    double ratio = a[i + 1] / a[i];
    rmax = std::max(rmax, ratio);
    double n = static_cast<double>(sample.n_offset + static_cast<long>(i));
    raabe_min = std::min(raabe_min, n * (a[i] / a[i + 1] - 1.0));
  }
  ev.raabe_min = raabe_min;

  if (rmax < 1.0) {
    ev.tail_bound = a.back() * rmax / (1.0 - rmax);
    if (ev.tail_bound < 1e-9) {
      ev.route = "geometric tail bound";
      if (evidence) *evidence = ev;
      return AaronsonVerdict::ConvergesAEConvergence;
    }
  }
  // geometric-rate route; the windowed rate ignores the constant prefactor
  double q_win = std::exp((std::log(a.back()) - std::log(a[half])) /
                          static_cast<double>(a.size() - 1 - half));
  if (q_win < 1.0 - 1e-3 && rmax < 1.0 - 1e-4) {
    ev.route = "q estimate";
    if (evidence) *evidence = ev;
    return AaronsonVerdict::ConvergesAEConvergence;
  }
  GaussResult g = gauss_divergence(sample, 1.5, 4.0);
  if (g.verdict == GaussVerdict::DivergentByGauss) {
    ev.gauss_divergent = true;
    ev.route = "gauss divergence";
    if (evidence) *evidence = ev;
    return AaronsonVerdict::DivergesConservative;
  }
  if (raabe_min >= 1.25) {
    ev.route = "raabe comparison";
    if (evidence) *evidence = ev;
    return AaronsonVerdict::ConvergesAEConvergence;
  }
  ev.route = "no certificate";
  if (evidence) *evidence = ev;
  return AaronsonVerdict::Inconclusive;
}

GaussResult gauss_divergence(const SeriesSample& sample, double r, double B_cap) {
  if (!(r > 1.0 && r < 2.0))
    throw ConfigError("InvalidParam", "gauss_divergence: r must lie in (1, 2)");
  if (!(B_cap >= 0) || !std::isfinite(B_cap))
    throw ConfigError("InvalidParam", "gauss_divergence: B_cap must be finite and >= 0");
  const auto& a = sample.a;
  GaussResult out;
  if (a.size() < 2) return out;
  // longest suffix on which the ratio bound holds
  long first_ok = static_cast<long>(a.size()) - 1;
  for (long i = static_cast<long>(a.size()) - 2; i >= 0; --i) {
    double n = static_cast<double>(sample.n_offset + i);
    if (n < 1) break;
    double bound = 1.0 + 1.0 / n + B_cap / std::pow(n, r);
    if (a[i] / a[i + 1] <= bound) {
      first_ok = i;
    } else {
      break;
    }
  }
  long pairs = static_cast<long>(a.size()) - 1 - first_ok;
  long need = std::max<long>(16, static_cast<long>(a.size()) / 4);
  if (pairs >= need) {
    out.verdict = GaussVerdict::DivergentByGauss;
    out.n0 = sample.n_offset + first_ok;
  }
  return out;
}

ThmCFit thmc_fit(const StepSequence& steps) {
  if (steps.d.size() < 256)
    throw ComputeError("InsufficientData", "thmc_fit: need at least 256 step distances");
  ThmCFit out;
  out.dominated = true;
  std::vector<double> xs, ys;
  std::size_t lo = steps.d.size() / 2;
  for (std::size_t i = 0; i < steps.d.size(); ++i) {
    double n = static_cast<double>(steps.n_offset + static_cast<long>(i));
    if (n < 1) continue;
    double resid = steps.d[i] - 1.0 / n;
    if (resid > 1e-18) out.dominated = false;
    if (i >= lo) {
      double floor = 1e-15 * steps.d[i];
      xs.push_back(std::log(n));
      ys.push_back(std::log(std::max(std::abs(resid), floor)));
    }
  }
  LinearFit fit = linear_fit(xs, ys);
  out.r_est = -fit.slope;
  out.c_est = std::exp(fit.intercept);
  out.slope_se = fit.slope_se;
  bool confident = (out.r_est - 1.96 * fit.slope_se) > 1.0;
  out.satisfied = out.dominated || confident;
  return out;
}

RipponStallardResult rippon_stallard_check(const OrbitRecord& orbit) {
  const auto& z = orbit.points;
  if (z.size() < 2)
    throw ComputeError("InsufficientData", "rippon_stallard_check: orbit too short");
  if (orbit.termination != TerminationKind::Escaped && orbit.n_steps < 64)
    throw ComputeError("InsufficientData",
                       "rippon_stallard_check: need an escaped orbit or budget >= 64");
  RipponStallardResult out;
  std::vector<double> ratios;
  std::vector<double> lx, ly;
  double partial = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    double m = std::abs(z[i]);
    if (m > 0) partial += 1.0 / std::sqrt(m);
    if (i + 1 < z.size() && m > 0) ratios.push_back(std::abs(z[i + 1]) / m);
    if (i >= 1 && m > 0) {
      lx.push_back(std::log(static_cast<double>(i)));
      ly.push_back(std::log(m));
    }
  }
  if (ratios.empty()) return out;
  double rmin = *std::min_element(ratios.begin(), ratios.end());

  // ratios sliding toward 1 mean the infimum is 1, not a valid K
  std::vector<double> rx, ry;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (ratios[i] > 1.0) {
      rx.push_back(std::log(static_cast<double>(i + 1)));
      ry.push_back(std::log(ratios[i] - 1.0));
    }
  }
  bool decaying = false;
  if (rx.size() >= ratios.size() / 2 && rx.size() >= 8) {
    LinearFit rfit = linear_fit(rx, ry);
    decaying = rfit.slope < -0.5 && rfit.r2 > 0.8;
  }
  LinearFit gfit = linear_fit(lx, ly);
  out.growth_exponent = gfit.slope;

  if (rmin >= 1.0 + 1e-6 && !decaying) {
    out.K = rmin;
    double tail = 1.0 / std::sqrt(std::abs(z.back())) / (std::sqrt(rmin) - 1.0);
    out.bound = partial + tail;
    out.sqrt_sum = RipponStallardResult::SqrtSum::Finite;
    return out;
  }
  out.bound = partial;
  double rtail = tail_median(ratios, ratios.size() / 4 + 1);
  if (gfit.slope <= 1.9 && gfit.r2 > 0.9 && rtail < 1.05) {
    out.sqrt_sum = RipponStallardResult::SqrtSum::Divergent;
  } else {
    out.sqrt_sum = RipponStallardResult::SqrtSum::Inconclusive;
  }
  return out;
}

namespace {

// sum_{k>=1} c0 / (c + k - 3/2)^r with an integral upper bound for the tail
double half_sum(double c0, double c, double r) {
  double acc = 0;
  int K = 100000;
  for (int k = 1; k <= K; ++k) {
    double term = c0 / std::pow(c + k - 1.5, r);
    acc += term;
    if (term < 1e-14 * std::max(acc, 1e-30)) {
      return acc + c0 * std::pow(c + k - 0.5, 1.0 - r) / (r - 1.0);
    }
  }
  return acc + c0 * std::pow(c + K - 0.5, 1.0 - r) / (r - 1.0);
}

}  // namespace

PropDReport propd_verify(const MapSpec& map, double c0, double c1, double r, int z_samples,
                         int n_max, uint64_t seed, int threads) {
  if (!(r > 1.0))
    throw ComputeError("PreconditionViolated", "propd_verify: requires r > 1");
  if (!(c1 > 0.5))
    throw ComputeError("PreconditionViolated", "propd_verify: requires c1 > 1/2");
  if (!map.baker_direction)
    throw ConfigError("InvalidParam", "propd_verify: map has no drift constant");
  Complex a = *map.baker_direction;

  PropDReport rep;
  rep.z_samples = z_samples;
  rep.n_max = n_max;
  rep.seed = seed;
  rep.half_sum_at_c1 = half_sum(c0, c1, r);
  rep.half_condition_at_c1 = rep.half_sum_at_c1 < 0.5;

  // the constant condition, enlarging c1 when the literal value fails
  if (rep.half_condition_at_c1) {
    rep.c1_effective = c1;
    rep.c1_effective_found = true;
  } else {
    double lo = c1, hi = c1 + 1.0;
    while (hi < c1 + 1e6 && half_sum(c0, hi, r) >= 0.5) hi = c1 + (hi - c1) * 2.0;
    if (half_sum(c0, hi, r) < 0.5) {
      for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        if (half_sum(c0, mid, r) < 0.5) hi = mid;
        else lo = mid;
      }
      rep.c1_effective = hi;
      rep.c1_effective_found = true;
    }
  }

  const double span = 40.0;
  // (i) envelope |f(z) - z - a| < c0 / Re(z/a)^r on samples of {Re(z/a) > c1}
  std::vector<double> env_ratio(z_samples, 0);
  std::vector<char> env_bad(z_samples, 0);
  std::vector<Complex> env_witness(z_samples);
  parallel_for(z_samples, threads, [&](long i) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(i));
    double u = c1 + rng.u01() * span + 1e-9;
    double v = rng.uniform(-span, span);
    Complex w{u, v};
    Complex z = a * w;
    EvalResult res = eval(map, z);
    if (res.status != EvalStatus::Ok) {
      env_bad[i] = 1;
      env_witness[i] = z;
      return;
    }
    double h = std::abs(res.value - z - a);
    double bound = c0 / std::pow(u, r) * std::abs(a);
    env_ratio[i] = h / bound;
    if (h >= bound) {
      env_bad[i] = 1;
      env_witness[i] = z;
    }
  });

  // (iii) real-part drift induction along rescaled orbits started past c1_effective
  double c_start = rep.c1_effective_found ? rep.c1_effective : c1;
  std::vector<char> ind_bad(z_samples, 0);
  std::vector<Complex> ind_witness(z_samples);
  parallel_for(z_samples, threads, [&](long i) {
    Rng rng = Rng::substream(seed ^ 0x5bd1e995, static_cast<uint64_t>(i));
    double u = c_start + rng.u01() * span + 1e-9;
    double v = rng.uniform(-span, span);
    Complex w0{u, v};
    Complex w = w0;
    double correction = 0;
    for (int n = 1; n <= n_max; ++n) {
      EvalResult res = eval(map, a * w);
      if (res.status != EvalStatus::Ok) {
        ind_bad[i] = 1;
        ind_witness[i] = a * w;
        return;
      }
      w = res.value / a;
      correction += c0 / std::pow(w0.real() + n - 1.5, r);
      if (!(w.real() > w0.real() + n - correction)) {
        ind_bad[i] = 1;
        ind_witness[i] = a * w;
        return;
      }
    }
  });

  rep.envelope_ok = true;
  rep.induction_ok = true;
  for (int i = 0; i < z_samples; ++i) {
    rep.envelope_max_ratio = std::max(rep.envelope_max_ratio, env_ratio[i]);
    if (env_bad[i]) {
      rep.envelope_ok = false;
      if (rep.violations == 0) rep.witness = env_witness[i];
      ++rep.violations;
    }
    if (ind_bad[i]) {
      rep.induction_ok = false;
      if (rep.violations == 0) rep.witness = ind_witness[i];
      ++rep.violations;
    }
  }
  rep.pass = rep.envelope_ok && rep.c1_effective_found && rep.induction_ok;
  return rep;
}

}  // namespace bakerlab

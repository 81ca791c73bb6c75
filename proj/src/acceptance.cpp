#include "bakerlab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "bakerlab/classify.hpp"
#include "bakerlab/errors.hpp"
#include "bakerlab/experiments.hpp"
#include "bakerlab/harmonic.hpp"

namespace bakerlab {

namespace {

using nlohmann::json;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED: " + what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

MapSpec b32() {
  double t = 1.0 / std::sqrt(3.0);
  json params{{"zeros", {{0.0, t}, {0.0, -t}}}};
  return registry_get("blaschke", params);
}

// 1. metric closed forms and Schwarz-Pick monotonicity
Check criterion1() {
  Check c;
  double d = dist_disc(Complex{0, 0}, Complex{0.5, 0});
  c.require(std::abs(d - std::log(3.0)) < 1e-12, "dist_disc(0,0.5) != ln 3 (got " + num(d) + ")");

  HalfPlane right{Complex{1, 0}, 0.0};
  Rng rng(20240811);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    auto sample = [&]() {
      double r = 0.95 * std::sqrt(rng.u01());
      return std::polar(r, rng.angle());
    };
    Complex z1 = sample(), z2 = sample();
    auto cayley = [](Complex z) { return (1.0 + z) / (1.0 - z); };
    double dd = dist_disc(z1, z2);
    double dh = dist_halfplane(right, cayley(z1), cayley(z2));
    worst = std::max(worst, std::abs(dd - dh));
  }
  c.require(worst < 1e-12, "Cayley consistency worst dev " + num(worst));
  c.note("cayley_max_dev=" + num(worst));

  auto monotone = [&](const MapSpec& m, Complex z0, const MetricModel& metric, long N,
                      const std::string& name) {
    StepSequence s = step_sequence(m, z0, metric, N);
    double worst_inc = 0;
    for (std::size_t i = 1; i < s.d.size(); ++i)
      worst_inc = std::max(worst_inc, s.d[i] - s.d[i - 1]);
    c.require(worst_inc < 1e-12, name + " steps not non-increasing (max inc " + num(worst_inc) + ")");
  };
  monotone(b32(), Complex{0, 0}, MetricModel::disc(), 4000, "blaschke");
  monotone(registry_get("mobius", json{{"a", 0.5}}), Complex{0, 0}, MetricModel::disc(), 256,
           "mobius");
  monotone(registry_get("parabolic_mobius", json::object()), Complex{0, 0}, MetricModel::disc(),
           512, "parabolic_mobius");
  monotone(registry_get("fatou", json::object()), Complex{10, 0},
           MetricModel::half_plane(Complex{1, 0}, 2.0), 10000, "fatou");
  return c;
}

// 2. doubly parabolic step asymptotic 1/(2n) for (3z^2+1)/(z^2+3)
Check criterion2() {
  Check c;
  MapSpec g = b32();
  StepSequence s = step_sequence(g, Complex{0, 0}, MetricModel::disc(), 10001);
  double worst = 0;
  long worst_n = 0;
  for (long n = 1000; n <= 10000; ++n) {
    double dev = std::abs(2.0 * n * s.d[n] - 1.0);
    if (dev > worst) {
      worst = dev;
      worst_n = n;
    }
  }
  c.require(worst < 0.1, "|2n d_n - 1| max " + num(worst) + " at n=" + std::to_string(worst_n));
  c.note("max|2n*d_n-1|=" + num(worst));

  DenjoyWolffData dw = find_denjoy_wolff(g, Complex{0, 0});
  BakerClassification cls = classify_inner(dw, s);
  c.require(cls.verdict == BakerVerdict::DoublyParabolic,
            std::string("verdict ") + to_string(cls.verdict));
  c.require(std::abs(dw.q_derivative - 1.0) < 1e-6, "q_derivative " + num(dw.q_derivative));
  c.require(std::abs(dw.q_root - 1.0) < 1e-6, "q_root " + num(dw.q_root));
  c.require(dw.gsecond_abs < 1e-6, "|g''(1)| " + num(dw.gsecond_abs));
  c.note("q_root=" + num(dw.q_root) + " g2=" + num(dw.gsecond_abs));
  return c;
}

// 3. hyperbolic inner model
Check criterion3() {
  Check c;
  MapSpec g = registry_get("mobius", json{{"a", 0.5}});
  DenjoyWolffData dw = find_denjoy_wolff(g, Complex{0, 0});
  c.require(std::abs(dw.p - Complex{1, 0}) < 1e-9, "p != 1");
  c.require(std::abs(dw.q_derivative - 1.0 / 3.0) < 1e-3, "q_derivative " + num(dw.q_derivative));
  c.require(std::abs(dw.q_root - 1.0 / 3.0) < 1e-3, "q_root " + num(dw.q_root));

  SeriesSample s = radial_series(g, Complex{0, 0}, 50);
  double partial = 0;
  for (double a : s.a) partial += a;
  double ratio = s.a.back() / s.a[s.a.size() - 2];
  double tail = s.a.back() * ratio / (1.0 - ratio);
  c.require(tail < 1e-6, "radial tail bound " + num(tail));
  c.note("sum50=" + num(partial) + " tail=" + num(tail));

  Rng rng(501);
  int reached = 0;
  for (int i = 0; i < 100; ++i) {
    double theta;
    do {
      theta = rng.angle();
    } while (std::abs(theta - kPi) < 1e-6);
    BoundaryOrbit orb = boundary_orbit(g, theta, 200, Precision::Double);
    if (orb.theta.size() >= 201 &&
        std::abs(std::polar(1.0, orb.theta.back()) - Complex{1, 0}) < 1e-6)
      ++reached;
  }
  c.require(reached >= 99, "only " + std::to_string(reached) + "/100 boundary starts reached p");
  c.note("reached=" + std::to_string(reached) + "/100");
  return c;
}

// 4. mu_p invariance
Check criterion4() {
  Check c;
  MuPValue closed = mu_p(CircleArc::from_endpoints(kPi / 2, 3 * kPi / 2), Complex{1, 0});
  c.require(std::abs(closed.value - 1.0 / kTwoPi) < 1e-10,
            "mu_p closed form " + num(closed.value));

  for (const MapSpec& g : {registry_get("mobius", json{{"a", 0.5}}), b32()}) {
    DenjoyWolffData dw = find_denjoy_wolff(g, Complex{0, 0}, 4096);
    double phi = std::arg(dw.p);
    Rng rng(42);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      double len = rng.uniform(0.1, 1.0);
      double u = rng.uniform(0.1, kTwoPi - 0.1 - len);
      MuInvarianceResult r = check_mu_invariance(g, CircleArc{normalize_angle(phi + u), len});
      worst = std::max(worst, r.rel_err);
    }
    c.require(worst < 1e-6, g.name + " mu invariance worst rel err " + num(worst));
    c.note(g.name + "_max_rel=" + num(worst));
  }
  return c;
}

// 5. drift-form pipeline on z + 1 + e^{-z}
Check criterion5() {
  Check c;
  MapSpec f = registry_get("fatou", json::object());
  PropDReport rep = propd_verify(f, 0.55, 2.0, 2.0, 200, 100, 11, 0);
  c.require(rep.pass, "propd_verify failed");
  c.note("envelope_max=" + num(rep.envelope_max_ratio) + " c1_eff=" + num(rep.c1_effective));

  MetricModel metric = MetricModel::half_plane(Complex{1, 0}, 2.0);
  StepSequence s = step_sequence(f, Complex{10, 0}, metric, 100000);
  double lo = 2, hi = 0;
  for (long n = 1000; n < 100000; ++n) {
    double v = n * s.d[n];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  c.require(lo >= 0.9 && hi <= 1.1, "n*d_n range [" + num(lo) + ", " + num(hi) + "]");
  c.note("n*d_n in [" + num(lo) + "," + num(hi) + "]");

  BakerClassification cls = classify_plane(f, Complex{10, 0}, metric, 8192);
  c.require(cls.verdict == BakerVerdict::DoublyParabolic,
            std::string("classify_plane verdict ") + to_string(cls.verdict));

  ThmCFit fit = thmc_fit(s);
  c.require(fit.satisfied, "thmc_fit not satisfied");
  c.require(fit.r_est > 1.0, "thmc r_est " + num(fit.r_est));
  c.note("r_est=" + num(fit.r_est));
  return c;
}

// 6. boundary dichotomy: z + tan z against the affine contrast
Check criterion6(int threads) {
  Check c;
  MapSpec tan_map = registry_get("tan", json::object());
  DomainModel upper = DomainModel::half_plane(Complex{0, 1}, 0.0);
  FateOptions opt;
  opt.iter_budget = 1000000;
  opt.escape_radius = 1e8;
  opt.min_returns = 10;
  opt.target = TargetBox{-1, 1, -1, 1};
  FateReport rep = dichotomy_experiment(tan_map, upper, Complex{0, 1}, 200, opt, 7, threads);
  double rec = static_cast<double>(rep.recurrent) / rep.n_samples;
  double esc = static_cast<double>(rep.escaping) / rep.n_samples;
  c.require(rec >= 0.9, "tan recurrent fraction " + num(rec));
  c.require(esc <= 0.1, "tan escaping fraction " + num(esc));
  c.note("tan: recurrent=" + num(rec) + " escaping=" + num(esc) +
         " undefined=" + std::to_string(rep.undefined));

  MapSpec aff = registry_get("affine", json{{"lambda", 2.0}});
  DomainModel right = DomainModel::half_plane(Complex{1, 0}, 0.0);
  FateOptions aopt;
  aopt.iter_budget = 500;
  aopt.escape_radius = 1e6;
  aopt.min_returns = 10;
  aopt.target = TargetBox{2, 3, -0.5, 0.5};  // off the invariant boundary line
  FateReport arep = dichotomy_experiment(aff, right, Complex{1, 0}, 100, aopt, 7, threads);
  c.require(arep.escaping == 100,
            "affine escaping " + std::to_string(arep.escaping) + "/100");
  c.note("affine escaping=" + std::to_string(arep.escaping) + "/100");
  return c;
}

// 7. ratio condition and hyperbolic refinement for 2z + e^{-z}
Check criterion7() {
  Check c;
  MapSpec m = registry_get("doubling", json::object());
  IterateOptions iopt;
  iopt.budget = 64;
  iopt.escape_radius = 1e12;
  OrbitRecord orbit = iterate(m, Complex{10, 0}, iopt);
  RipponStallardResult rs = rippon_stallard_check(orbit);
  c.require(rs.K.has_value() && *rs.K >= 1.9, "K not certified >= 1.9");
  c.require(rs.sqrt_sum == RipponStallardResult::SqrtSum::Finite, "sqrt sum not finite");
  if (rs.K) c.note("K=" + num(*rs.K) + " bound=" + num(rs.bound));

  MetricModel metric = MetricModel::half_plane(Complex{1, 0}, 1.0);
  StepSequence s = step_sequence(m, Complex{10, 0}, metric, 64);
  double worst = 0;
  for (std::size_t n = 5; n < s.d.size(); ++n)
    worst = std::max(worst, std::abs(s.d[n] - std::log(2.0)));
  c.require(worst < 0.05, "d_n - ln2 max dev " + num(worst));

  BakerClassification cls = classify_plane(m, Complex{10, 0}, metric, 64);
  c.require(cls.verdict == BakerVerdict::Hyperbolic,
            std::string("verdict ") + to_string(cls.verdict));
  c.note("ratio_limit=" + num(cls.ratio_limit.value_or(0)));
  return c;
}

// 8. harmonic-measure sampling laws
Check criterion8() {
  Check c;
  DomainModel disc = DomainModel::unit_disc();
  {
    long N = 100000;
    std::vector<long> counts(8, 0);
    for (long i = 0; i < N; ++i) {
      Rng rng = Rng::substream(88, static_cast<uint64_t>(i));
      HarmonicSample s = wos_sample(disc, Complex{0, 0}, 1e-9, rng.next());
      double th = normalize_angle(std::arg(s.boundary_point));
      counts[static_cast<int>(th / (kPi / 4)) & 7]++;
    }
    double worst = 0;
    for (long k : counts) worst = std::max(worst, std::abs(k / static_cast<double>(N) - 0.125));
    c.require(worst < 0.01, "eighth-arc worst dev " + num(worst));
    c.note("eighth_dev=" + num(worst));
  }
  {
    long N = 100000;
    long right = 0;
    for (long i = 0; i < N; ++i) {
      Rng rng = Rng::substream(89, static_cast<uint64_t>(i));
      HarmonicSample s = wos_sample(disc, Complex{0.5, 0}, 1e-9, rng.next());
      if (s.boundary_point.real() > 0 && std::abs(std::arg(s.boundary_point)) < kPi / 2) ++right;
    }
    double freq = right / static_cast<double>(N);
    double expect = 2.0 / kPi * std::atan(3.0);
    c.require(std::abs(freq - expect) < 0.01, "right semicircle freq " + num(freq));
    c.note("semicircle=" + num(freq) + " vs " + num(expect));
  }
  {
    long N = 10000;
    DomainModel upper = DomainModel::half_plane(Complex{0, 1}, 0.0);
    std::vector<double> xs;
    xs.reserve(N);
    for (long i = 0; i < N; ++i) {
      Rng rng = Rng::substream(90, static_cast<uint64_t>(i));
      HarmonicSample s = wos_sample(upper, Complex{0, 1}, 1e-9, rng.next());
      xs.push_back(s.boundary_point.real());
    }
    std::sort(xs.begin(), xs.end());
    double ks = 0;
    for (long i = 0; i < N; ++i) {
      double F = 0.5 + std::atan(xs[i]) / kPi;
      ks = std::max(ks, std::max(std::abs((i + 1.0) / N - F), std::abs(i / static_cast<double>(N) - F)));
    }
    double crit = 1.62762 / std::sqrt(static_cast<double>(N));
    c.require(ks < crit, "KS " + num(ks) + " vs crit " + num(crit));
    c.note("ks=" + num(ks) + " crit=" + num(crit));
  }
  return c;
}

// 9. series test suite
Check criterion9() {
  Check c;
  auto series = [](const std::function<double(long)>& f, long N, long off = 1) {
    SeriesSample s;
    s.n_offset = off;
    for (long n = off; n < off + N; ++n) s.a.push_back(f(n));
    return s;
  };
  GaussResult g1 = gauss_divergence(series([](long n) { return 1.0 / n; }, 4096), 1.5, 4.0);
  c.require(g1.verdict == GaussVerdict::DivergentByGauss, "1/n not divergent-by-gauss");
  GaussResult g2 =
      gauss_divergence(series([](long n) { return 1.0 / (static_cast<double>(n) * n); }, 4096),
                       1.5, 4.0);
  c.require(g2.verdict == GaussVerdict::ConditionNotMet, "1/n^2 misclassified");
  GaussResult g3 = gauss_divergence(
      series([](long n) { return 1.0 / (n * std::log(static_cast<double>(n))); }, 4096, 2), 1.5,
      4.0);
  c.require(g3.verdict == GaussVerdict::ConditionNotMet, "1/(n ln n) misclassified");

  StepSequence bad;
  bad.n_offset = 1;
  for (long n = 1; n <= 512; ++n) bad.d.push_back(2.0 / n);
  ThmCFit fbad = thmc_fit(bad);
  c.require(!fbad.satisfied, "d=2/n accepted");

  StepSequence good;
  good.n_offset = 1;
  for (long n = 1; n <= 512; ++n)
    good.d.push_back(1.0 / n + 5.0 * std::pow(static_cast<double>(n), -1.5));
  ThmCFit fgood = thmc_fit(good);
  c.require(fgood.satisfied, "d=1/n+5/n^1.5 rejected");
  c.require(std::abs(fgood.r_est - 1.5) < 0.1, "r_est " + num(fgood.r_est));
  c.note("r_est=" + num(fgood.r_est));
  return c;
}

// 10. verdict payloads identical across thread counts
Check criterion10() {
  Check c;
  std::vector<json> configs = {
      json{{"experiment", "orbit"}, {"map", "affine"}, {"lambda", 2.0}, {"z0", "1+0i"},
           {"budget", 50}, {"escape_radius", 100.0}, {"seed", 3}},
      json{{"experiment", "steps"}, {"map", "fatou"}, {"z0", "10+0i"}, {"N", 500},
           {"metric", json{{"kind", "halfplane"}, {"direction", {1.0, 0.0}}, {"offset", 2.0}}},
           {"seed", 3}},
      json{{"experiment", "classify"}, {"map", "mobius"}, {"a", 0.5}, {"N", 256},
           {"q_budget", 1 << 20}, {"seed", 3}},
      json{{"experiment", "inner-check"}, {"map", "parabolic_mobius"}, {"q_budget", 1 << 16},
           {"seed", 3}},
      json{{"experiment", "mu-invariance"}, {"map", "mobius"}, {"a", 0.5}, {"n_arcs", 5},
           {"seed", 3}},
      json{{"experiment", "sample"}, {"domain", json{{"kind", "disc"}}},
           {"basepoint", "0.5+0i"}, {"n_samples", 2000}, {"seed", 3}},
      json{{"experiment", "dichotomy"}, {"map", "tan"},
           {"domain", json{{"kind", "halfplane"}, {"direction", {0.0, 1.0}}, {"offset", 0.0}}},
           {"basepoint", "0+1i"}, {"n_samples", 16}, {"budget", 20000}, {"min_returns", 5},
           {"target", {-1.0, 1.0}}, {"seed", 3}},
      json{{"experiment", "verify-propd"}, {"map", "fatou"}, {"c0", 0.55}, {"c1", 2.0},
           {"r", 2.0}, {"z_samples", 64}, {"n_max", 32}, {"seed", 3}},
      json{{"experiment", "series-test"},
           {"series", json{{"kind", "harmonic"}, {"N", 512}}},
           {"dn", json{{"kind", "one_over_n_plus_power"}, {"c", 5.0}, {"r", 1.5}, {"N", 512}}},
           {"seed", 3}},
  };
  for (const auto& cfg : configs) {
    RunResult a = run_experiment(cfg, 1);
    RunResult b = run_experiment(cfg, 8);
    a.report.erase("timing");
    b.report.erase("timing");
    bool same = a.report.dump() == b.report.dump();
    for (std::size_t i = 0; same && i < a.csv_files.size(); ++i)
      same = b.csv_files.size() > i && a.csv_files[i] == b.csv_files[i];
    c.require(same, "experiment '" + cfg.at("experiment").get<std::string>() +
                        "' not thread-count invariant");
  }
  c.note("9 experiment types compared at threads 1 vs 8");
  return c;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(int threads) {
  struct Entry {
    int id;
    const char* name;
    std::function<Check()> fn;
  };
  std::vector<Entry> entries = {
      {1, "metric closed forms", criterion1},
      {2, "doubly parabolic 1/(2n) asymptotic", criterion2},
      {3, "hyperbolic inner model", criterion3},
      {4, "mu_p invariance", criterion4},
      {5, "drift-form pipeline (fatou)", criterion5},
      {6, "boundary dichotomy (tan vs affine)", [threads] { return criterion6(threads); }},
      {7, "ratio condition and hyperbolic refinement", criterion7},
      {8, "harmonic measure sampling laws", criterion8},
      {9, "series test suite", criterion9},
      {10, "thread-count determinism", criterion10},
  };
  std::vector<CriterionResult> out;
  for (auto& e : entries) {
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    auto t0 = std::chrono::steady_clock::now();
    try {
      Check c = e.fn();
      r.pass = c.ok;
      r.detail = c.detail;
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    r.seconds = std::chrono::duration<double>(t1 - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_acceptance(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  int fails = 0;
  for (const auto& r : results) {
    os << "criterion " << r.id << " " << (r.pass ? "PASS" : "FAIL") << " [" << r.name << "] ("
       << num(r.seconds) << "s)";
    if (!r.detail.empty()) os << " " << r.detail;
    os << "\n";
    if (!r.pass) ++fails;
  }
  os << (fails == 0 ? "acceptance: all criteria passed"
                    : "acceptance: " + std::to_string(fails) + " criterion(s) failed")
     << "\n";
  return os.str();
}

}  // namespace bakerlab

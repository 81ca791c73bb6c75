#include "bakerlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "bakerlab/classify.hpp"
#include "bakerlab/errors.hpp"
#include "bakerlab/harmonic.hpp"

namespace bakerlab {

const char* kVersion = "0.1.0";

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError("ConfigError", where + ": expected a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("ConfigError", where + ": unknown key '" + it.key() + "'");
}

double num_or(const json& cfg, const char* key, double def) {
  if (!cfg.contains(key)) return def;
  if (!cfg.at(key).is_number())
    throw ConfigError("ConfigError", std::string("expected number for '") + key + "'");
  return cfg.at(key).get<double>();
}

long int_or(const json& cfg, const char* key, long def) {
  if (!cfg.contains(key)) return def;
  if (!cfg.at(key).is_number_integer())
    throw ConfigError("ConfigError", std::string("expected integer for '") + key + "'");
  return cfg.at(key).get<long>();
}

uint64_t seed_of(const json& cfg) {
  if (!cfg.contains("seed")) return 1;
  return cfg.at("seed").get<uint64_t>();
}

const std::set<std::string> kMapParamKeys = {"half_plane", "delta",    "terms", "a",
                                             "zeros",      "rotation", "lambda"};

MapSpec map_from(const json& cfg, json& resolved) {
  if (!cfg.contains("map")) throw ConfigError("ConfigError", "config requires 'map'");
  std::string name;
  json params = json::object();
  const json& m = cfg.at("map");
  if (m.is_string()) {
    name = m.get<std::string>();
    if (cfg.contains("params")) {
      params = cfg.at("params");
    } else {
      for (const auto& k : kMapParamKeys)
        if (cfg.contains(k)) params[k] = cfg.at(k);
    }
  } else if (m.is_object()) {
    check_keys(m, {"name", "params"}, "map");
    name = m.at("name").get<std::string>();
    if (m.contains("params")) params = m.at("params");
  } else {
    throw ConfigError("ConfigError", "'map' must be a name or {name, params}");
  }
  MapSpec spec = registry_get(name, params);
  resolved["map"] = json{{"name", spec.name}, {"params", params}};
  return spec;
}

MetricModel metric_from(const json& cfg, json& resolved, const MapSpec& map) {
  if (!cfg.contains("metric")) {
    if (map.is_inner()) {
      resolved["metric"] = json{{"kind", "disc"}};
      return MetricModel::disc();
    }
    throw ConfigError("ConfigError", "plane maps require a 'metric' object");
  }
  const json& j = cfg.at("metric");
  check_keys(j, {"kind", "direction", "offset"}, "metric");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "disc") {
    resolved["metric"] = json{{"kind", "disc"}};
    return MetricModel::disc();
  }
  if (kind == "halfplane") {
    Complex dir = j.contains("direction") ? parse_complex(j.at("direction")) : Complex{1, 0};
    double off = num_or(j, "offset", 0.0);
    resolved["metric"] = json{{"kind", "halfplane"}, {"direction", cjson(dir / std::abs(dir))},
                              {"offset", off}};
    return MetricModel::half_plane(dir, off);
  }
  throw ConfigError("ConfigError", "metric kind must be 'disc' or 'halfplane'");
}

DomainModel domain_from(const json& cfg, const MapSpec& map, json& resolved) {
  if (!cfg.contains("domain")) throw ConfigError("ConfigError", "config requires 'domain'");
  const json& j = cfg.at("domain");
  check_keys(j,
             {"kind", "direction", "offset", "strip_center", "strip_halfwidth", "budget",
              "big_radius"},
             "domain");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "disc") {
    resolved["domain"] = json{{"kind", "disc"}};
    return DomainModel::unit_disc();
  }
  if (kind == "halfplane") {
    Complex dir = j.contains("direction") ? parse_complex(j.at("direction")) : Complex{1, 0};
    double off = num_or(j, "offset", 0.0);
    resolved["domain"] = json{{"kind", "halfplane"}, {"direction", cjson(dir / std::abs(dir))},
                              {"offset", off}};
    return DomainModel::half_plane(dir, off);
  }
  if (kind == "oracle") {
    OracleDomain od;
    od.map = map;
    Complex dir = j.contains("direction") ? parse_complex(j.at("direction")) : Complex{1, 0};
    od.entry = HalfPlane{dir / std::abs(dir), num_or(j, "offset", 2.0)};
    od.strip_center = num_or(j, "strip_center", 0.0);
    od.strip_halfwidth = num_or(j, "strip_halfwidth",
                                std::numeric_limits<double>::infinity());
    od.budget = int_or(j, "budget", 200);
    od.big_radius = num_or(j, "big_radius", 1e8);
    resolved["domain"] = json{{"kind", "oracle"},
                              {"direction", cjson(od.entry.direction)},
                              {"offset", od.entry.offset},
                              {"strip_center", od.strip_center},
                              {"strip_halfwidth", od.strip_halfwidth},
                              {"budget", od.budget},
                              {"big_radius", od.big_radius}};
    return DomainModel::oracle_domain(std::move(od));
  }
  throw ConfigError("ConfigError", "domain kind must be 'disc', 'halfplane' or 'oracle'");
}

TargetBox target_from(const json& cfg, json& resolved) {
  TargetBox t;
  if (cfg.contains("target")) {
    const json& j = cfg.at("target");
    if (j.is_array() && j.size() == 2 && j[0].is_number()) {
      t.re_min = j[0].get<double>();
      t.re_max = j[1].get<double>();
      t.im_min = -1;
      t.im_max = 1;
    } else if (j.is_object()) {
      check_keys(j, {"re", "im"}, "target");
      t.re_min = j.at("re")[0].get<double>();
      t.re_max = j.at("re")[1].get<double>();
      t.im_min = j.contains("im") ? j.at("im")[0].get<double>() : -1;
      t.im_max = j.contains("im") ? j.at("im")[1].get<double>() : 1;
    } else {
      throw ConfigError("ConfigError", "target must be [a, b] or {re: [a,b], im: [c,d]}");
    }
  }
  resolved["target"] = json{{"re", {t.re_min, t.re_max}}, {"im", {t.im_min, t.im_max}}};
  return t;
}

Complex z0_from(const json& cfg, const char* key, Complex def, json& resolved) {
  Complex z = cfg.contains(key) ? parse_complex(cfg.at(key)) : def;
  resolved[key] = cjson(z);
  return z;
}

json dw_json(const DenjoyWolffData& dw) {
  const char* mult = dw.multiplicity == Multiplicity::Attracting    ? "attracting"
                     : dw.multiplicity == Multiplicity::Parabolic2  ? "parabolic2"
                     : dw.multiplicity == Multiplicity::Parabolic3  ? "parabolic3"
                                                                    : "unknown";
  return json{{"p", cjson(dw.p)},
              {"q_derivative", dw.q_derivative},
              {"q_root", dw.q_root},
              {"q_root_n", dw.q_root_n},
              {"q_agreement", dw.q_agreement},
              {"multiplicity", mult},
              {"gprime_dist_to_1", dw.gprime_dist_to_1},
              {"gsecond_abs", dw.gsecond_abs},
              {"fixed_point_cluster", dw.fixed_point_cluster},
              {"thresholds", json{{"parabolic_tol", kParabolicTol},
                                  {"parabolic3_tol", kParabolic3Tol}}}};
}

json classification_json(const BakerClassification& c) {
  json out{{"verdict", to_string(c.verdict)},
           {"fit", json{{"slope", c.fit_slope}, {"r2", c.fit_r2}}},
           {"thresholds", json{{"q_tol", c.thresholds.q_tol},
                               {"ratio_tol", c.thresholds.ratio_tol},
                               {"slope_max", c.thresholds.slope_max},
                               {"r2_min", c.thresholds.r2_min},
                               {"proxy_min", c.thresholds.proxy_min}}}};
  if (c.q_est) out["q_est"] = *c.q_est;
  if (c.b_est) out["b_est"] = *c.b_est;
  if (c.ratio_limit) out["ratio_limit"] = *c.ratio_limit;
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

SeriesSample synthetic_series(const json& j, json& resolved) {
  check_keys(j, {"kind", "N", "map", "params", "w0", "exponent"}, "series");
  std::string kind = j.at("kind").get<std::string>();
  long N = int_or(j, "N", 4096);
  SeriesSample s;
  s.n_offset = 1;
  resolved["series"] = json{{"kind", kind}, {"N", N}};
  if (kind == "harmonic") {
    for (long n = 1; n <= N; ++n) s.a.push_back(1.0 / n);
  } else if (kind == "inverse_square") {
    for (long n = 1; n <= N; ++n) s.a.push_back(1.0 / (static_cast<double>(n) * n));
  } else if (kind == "nlogn") {
    s.n_offset = 2;
    for (long n = 2; n <= N + 1; ++n) s.a.push_back(1.0 / (n * std::log(static_cast<double>(n))));
  } else if (kind == "power") {
    double e = num_or(j, "exponent", 2.0);
    resolved["series"]["exponent"] = e;
    for (long n = 1; n <= N; ++n) s.a.push_back(std::pow(static_cast<double>(n), -e));
  } else if (kind == "radial") {
    json tmp;
    MapSpec g = map_from(j, tmp);
    Complex w0 = j.contains("w0") ? parse_complex(j.at("w0")) : Complex{0, 0};
    s = radial_series(g, w0, N);
    resolved["series"]["map"] = tmp["map"];
    resolved["series"]["w0"] = cjson(w0);
  } else {
    throw ConfigError("ConfigError", "unknown series kind '" + kind + "'");
  }
  return s;
}

StepSequence synthetic_steps(const json& j, json& resolved) {
  check_keys(j, {"kind", "N", "c", "r"}, "dn");
  std::string kind = j.at("kind").get<std::string>();
  long N = int_or(j, "N", 512);
  double c = num_or(j, "c", 1.0);
  StepSequence seq;
  seq.n_offset = 1;
  resolved["dn"] = json{{"kind", kind}, {"N", N}, {"c", c}};
  if (kind == "c_over_n") {
    for (long n = 1; n <= N; ++n) seq.d.push_back(c / n);
  } else if (kind == "one_over_n_plus_power") {
    double r = num_or(j, "r", 1.5);
    resolved["dn"]["r"] = r;
    for (long n = 1; n <= N; ++n)
      seq.d.push_back(1.0 / n + c * std::pow(static_cast<double>(n), -r));
  } else {
    throw ConfigError("ConfigError", "unknown dn kind '" + kind + "'");
  }
  return seq;
}

std::string steps_csv(const StepSequence& s) {
  std::string csv = "# n,d_n,n_dn\n";
  for (std::size_t i = 0; i < s.d.size(); ++i) {
    double n = static_cast<double>(s.n_offset + static_cast<long>(i));
    csv += fmt(n) + "," + fmt(s.d[i]) + "," + fmt(n * s.d[i]) + "\n";
  }
  return csv;
}

// ---- experiment handlers ---------------------------------------------------

void run_orbit(const json& cfg, int threads, json& resolved, json& results, RunResult& rr) {
  (void)threads;
  MapSpec map = map_from(cfg, resolved);
  Complex z0 = z0_from(cfg, "z0", Complex{0, 0}, resolved);
  IterateOptions opt;
  opt.budget = int_or(cfg, "budget", 1000);
  opt.escape_radius = num_or(cfg, "escape_radius", 1e6);
  opt.confirm_window = static_cast<int>(int_or(cfg, "confirm_window", 3));
  resolved["budget"] = opt.budget;
  resolved["escape_radius"] = opt.escape_radius;
  resolved["confirm_window"] = opt.confirm_window;
  OrbitRecord rec = iterate(map, z0, opt);
  const char* term = rec.termination == TerminationKind::BudgetExhausted ? "budget_exhausted"
                     : rec.termination == TerminationKind::Escaped       ? "escaped"
                     : rec.termination == TerminationKind::PoleHit       ? "pole_hit"
                     : rec.termination == TerminationKind::Overflow      ? "overflow"
                                                                         : "precision_loss";
  results = json{{"termination", term},
                 {"n_steps", rec.n_steps},
                 {"event_index", rec.event_index},
                 {"final", cjson(rec.points.back())},
                 {"final_abs", std::abs(rec.points.back())}};
  std::string csv = "# n,re,im,abs\n";
  for (std::size_t i = 0; i < rec.points.size(); ++i)
    csv += std::to_string(i) + "," + fmt(rec.points[i].real()) + "," + fmt(rec.points[i].imag()) +
           "," + fmt(std::abs(rec.points[i])) + "\n";
  rr.csv_files.emplace_back("orbit.csv", csv);
}

void run_steps(const json& cfg, int threads, json& resolved, json& results, RunResult& rr) {
  (void)threads;
  MapSpec map = map_from(cfg, resolved);
  Complex z0 = z0_from(cfg, "z0", Complex{0, 0}, resolved);
  MetricModel metric = metric_from(cfg, resolved, map);
  long N = int_or(cfg, "N", 1000);
  resolved["N"] = N;
  StepSequence seq = step_sequence(map, z0, metric, N);
  results = json{{"N", N},
                 {"upper_bound", seq.upper_bound},
                 {"d_first", seq.d.front()},
                 {"d_last", seq.d.back()}};
  rr.csv_files.emplace_back("steps.csv", steps_csv(seq));
}

void run_classify(const json& cfg, int threads, json& resolved, json& results, RunResult& rr) {
  (void)threads;
  (void)rr;
  MapSpec map = map_from(cfg, resolved);
  long N = int_or(cfg, "N", 4096);
  resolved["N"] = N;
  if (map.is_inner()) {
    Complex w0 = z0_from(cfg, "w0", Complex{0, 0}, resolved);
    long q_budget = int_or(cfg, "q_budget", 1L << 26);
    resolved["q_budget"] = q_budget;
    DenjoyWolffData dw = find_denjoy_wolff(map, w0, q_budget);
    StepSequence seq = step_sequence(map, w0, MetricModel::disc(), N);
    BakerClassification c = classify_inner(dw, seq);
    results = classification_json(c);
    results["denjoy_wolff"] = dw_json(dw);
  } else {
    Complex z0 = z0_from(cfg, "z0", Complex{10, 0}, resolved);
    MetricModel metric = metric_from(cfg, resolved, map);
    BakerClassification c = classify_plane(map, z0, metric, N);
    results = classification_json(c);
  }
}

void run_inner_check(const json& cfg, int threads, json& resolved, json& results, RunResult& rr) {
  (void)threads;
  (void)rr;
  MapSpec map = map_from(cfg, resolved);
  if (!map.is_inner()) throw ConfigError("ConfigError", "inner-check requires an inner map kind");
  Complex w0 = z0_from(cfg, "w0", Complex{0, 0}, resolved);
  long q_budget = int_or(cfg, "q_budget", 1L << 26);
  resolved["q_budget"] = q_budget;
  DenjoyWolffData dw = find_denjoy_wolff(map, w0, q_budget);
  results = json{{"denjoy_wolff", dw_json(dw)}};

  double max_dev = 0;
  for (int k = 0; k < 1024; ++k) {
    double th = kTwoPi * k / 1024.0;
    Complex val = eval(map, std::polar(1.0, th)).value;
    max_dev = std::max(max_dev, std::abs(std::abs(val) - 1.0));
  }
  results["boundary_modulus_max_dev"] = max_dev;

  double winding = 0;
  double prev = std::arg(eval(map, Complex{1.0, 0.0}).value);
  int grid = 4096;
  for (int k = 1; k <= grid; ++k) {
    double th = kTwoPi * k / grid;
    double cur = std::arg(eval(map, std::polar(1.0, th)).value);
    double dphi = cur - prev;
    while (dphi > kPi) dphi -= kTwoPi;
    while (dphi < -kPi) dphi += kTwoPi;
    winding += dphi;
    prev = cur;
  }
  results["circle_degree"] = std::lround(winding / kTwoPi);
}

void run_mu_invariance(const json& cfg, int threads, json& resolved, json& results, RunResult& rr) {
  (void)threads;
  (void)rr;
  MapSpec map = map_from(cfg, resolved);
  uint64_t seed = seed_of(cfg);
  results["checks"] = json::array();
  double max_rel = 0;
  auto push = [&](const CircleArc& arc) {
    MuInvarianceResult r = check_mu_invariance(map, arc);
    max_rel = std::max(max_rel, r.rel_err);
    results["checks"].push_back(json{{"arc_start", arc.start},
                                     {"arc_length", arc.length},
                                     {"lhs", r.lhs},
                                     {"rhs", r.rhs},
                                     {"rel_err", r.rel_err},
                                     {"q", r.q}});
  };
  if (cfg.contains("arc")) {
    CircleArc arc = CircleArc::from_endpoints(cfg.at("arc")[0].get<double>(),
                                              cfg.at("arc")[1].get<double>());
    resolved["arc"] = json::array({arc.start, arc.end()});
    push(arc);
  } else {
    long n_arcs = int_or(cfg, "n_arcs", 20);
    double margin = num_or(cfg, "margin", 0.1);
    resolved["n_arcs"] = n_arcs;
    resolved["margin"] = margin;
    DenjoyWolffData dw = find_denjoy_wolff(map, Complex{0, 0}, 4096);
    double phi = std::arg(dw.p);
    Rng rng(seed);
    for (long i = 0; i < n_arcs; ++i) {
      double len = rng.uniform(0.1, 1.0);
      double u = rng.uniform(margin, kTwoPi - margin - len);
      push(CircleArc{normalize_angle(phi + u), len});
    }
  }
  results["max_rel_err"] = max_rel;
  results["quad_tolerance"] = 1e-9;
}

void run_sample(const json& cfg, int threads, json& resolved, json& results, RunResult& rr) {
  (void)threads;
  MapSpec map = cfg.contains("map") ? map_from(cfg, resolved) : MapSpec{};
  DomainModel domain = domain_from(cfg, map, resolved);
  Complex base = z0_from(cfg, "basepoint", Complex{0, 0}, resolved);
  long n = int_or(cfg, "n_samples", 1000);
  double eps = num_or(cfg, "eps_boundary", 1e-9);
  uint64_t seed = seed_of(cfg);
  resolved["n_samples"] = n;
  resolved["eps_boundary"] = eps;
  if (domain.kind == DomainModel::Kind::Oracle) validate_oracle_domain(*domain.oracle);
  std::string csv = "# sample_id,re,im,walk_steps,terminal_radius\n";
  long stuck = 0;
  Complex mean{0, 0};
  for (long i = 0; i < n; ++i) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(i));
    HarmonicSample s = wos_sample(domain, base, eps, rng.next());
    if (s.stuck) {
      ++stuck;
      continue;
    }
    mean += s.boundary_point / static_cast<double>(n);
    csv += std::to_string(i) + "," + fmt(s.boundary_point.real()) + "," +
           fmt(s.boundary_point.imag()) + "," + std::to_string(s.walk_steps) + "," +
           fmt(s.terminal_radius) + "\n";
  }
  results = json{{"n_samples", n}, {"stuck", stuck}, {"mean", cjson(mean)}};
  rr.csv_files.emplace_back("samples.csv", csv);
}

void run_dichotomy(const json& cfg, int threads, json& resolved, json& results, RunResult& rr) {
  MapSpec map = map_from(cfg, resolved);
  DomainModel domain = domain_from(cfg, map, resolved);
  Complex base = z0_from(cfg, "basepoint", Complex{0, 1}, resolved);
  FateOptions opt;
  opt.iter_budget = int_or(cfg, "budget", 1000000);
  opt.escape_radius = num_or(cfg, "escape_radius", 1e8);
  opt.min_returns = int_or(cfg, "min_returns", 10);
  opt.confirm_window = static_cast<int>(int_or(cfg, "confirm_window", 3));
  opt.eps_boundary = num_or(cfg, "eps_boundary", 1e-9);
  opt.target = target_from(cfg, resolved);
  long n = int_or(cfg, "n_samples", 100);
  uint64_t seed = seed_of(cfg);
  resolved["budget"] = opt.iter_budget;
  resolved["escape_radius"] = opt.escape_radius;
  resolved["min_returns"] = opt.min_returns;
  resolved["confirm_window"] = opt.confirm_window;
  resolved["eps_boundary"] = opt.eps_boundary;
  resolved["n_samples"] = n;

  FateReport rep = dichotomy_experiment(map, domain, base, n, opt, seed, threads);
  results = json{{"n_samples", rep.n_samples},
                 {"escaping", rep.escaping},
                 {"recurrent", rep.recurrent},
                 {"pole_hit", rep.pole_hit},
                 {"undefined", rep.undefined},
                 {"escaping_fraction", static_cast<double>(rep.escaping) / rep.n_samples},
                 {"recurrent_fraction", static_cast<double>(rep.recurrent) / rep.n_samples}};
  std::string csv = "# sample_id,re,im,fate,returns,steps\n";
  for (const auto& row : rep.rows)
    csv += std::to_string(row.sample_id) + "," + fmt(row.boundary_point.real()) + "," +
           fmt(row.boundary_point.imag()) + "," + to_string(row.fate) + "," +
           std::to_string(row.returns) + "," + std::to_string(row.steps) + "\n";
  rr.csv_files.emplace_back("fates.csv", csv);
}

void run_verify_propd(const json& cfg, int threads, json& resolved, json& results, RunResult& rr) {
  (void)rr;
  MapSpec map = map_from(cfg, resolved);
  double c0 = num_or(cfg, "c0", 0.55);
  double c1 = num_or(cfg, "c1", 2.0);
  double r = num_or(cfg, "r", 2.0);
  int z_samples = static_cast<int>(int_or(cfg, "z_samples", 200));
  int n_max = static_cast<int>(int_or(cfg, "n_max", 100));
  uint64_t seed = seed_of(cfg);
  resolved["c0"] = c0;
  resolved["c1"] = c1;
  resolved["r"] = r;
  resolved["z_samples"] = z_samples;
  resolved["n_max"] = n_max;
  PropDReport rep = propd_verify(map, c0, c1, r, z_samples, n_max, seed, threads);
  results = json{{"pass", rep.pass},
                 {"envelope_ok", rep.envelope_ok},
                 {"envelope_max_ratio", rep.envelope_max_ratio},
                 {"half_sum_at_c1", rep.half_sum_at_c1},
                 {"half_condition_at_c1", rep.half_condition_at_c1},
                 {"c1_effective", rep.c1_effective},
                 {"c1_effective_found", rep.c1_effective_found},
                 {"induction_ok", rep.induction_ok},
                 {"violations", rep.violations},
                 {"witness", cjson(rep.witness)}};
}

void run_series_test(const json& cfg, int threads, json& resolved, json& results, RunResult& rr) {
  (void)threads;
  (void)rr;
  if (!cfg.contains("series") && !cfg.contains("dn"))
    throw ConfigError("ConfigError", "series-test requires 'series' and/or 'dn'");
  if (cfg.contains("series")) {
    SeriesSample s = synthetic_series(cfg.at("series"), resolved);
    double gr = num_or(cfg, "gauss_r", 1.5);
    double gb = num_or(cfg, "gauss_B", 4.0);
    resolved["gauss_r"] = gr;
    resolved["gauss_B"] = gb;
    GaussResult g = gauss_divergence(s, gr, gb);
    AaronsonEvidence ev;
    AaronsonVerdict v = aaronson_verdict(s, &ev);
    results["gauss"] = json{
        {"verdict", g.verdict == GaussVerdict::DivergentByGauss ? "divergent_by_gauss"
                                                                : "condition_not_met"},
        {"n0", g.n0}};
    results["aaronson"] = json{{"verdict", to_string(v)},
                               {"route", ev.route},
                               {"q_est", ev.q_est},
                               {"raabe_min", ev.raabe_min},
                               {"tail_bound", ev.tail_bound}};
  }
  if (cfg.contains("dn")) {
    StepSequence seq = synthetic_steps(cfg.at("dn"), resolved);
    ThmCFit fit = thmc_fit(seq);
    results["thmc"] = json{{"satisfied", fit.satisfied},
                           {"r_est", fit.r_est},
                           {"c_est", fit.c_est},
                           {"slope_se", fit.slope_se},
                           {"dominated", fit.dominated}};
  }
}

}  // namespace

RunResult run_experiment(const json& config, int threads) {
  auto t0 = std::chrono::steady_clock::now();
  if (!config.is_object()) throw ConfigError("ConfigError", "config must be a JSON object");
  if (!config.contains("experiment"))
    throw ConfigError("ConfigError", "config requires 'experiment'");
  std::string exp = config.at("experiment").get<std::string>();

  RunResult rr;
  json resolved = json::object();
  json results = json::object();
  uint64_t seed = seed_of(config);
  resolved["seed"] = seed;

  if (exp == "orbit") run_orbit(config, threads, resolved, results, rr);
  else if (exp == "steps") run_steps(config, threads, resolved, results, rr);
  else if (exp == "classify") run_classify(config, threads, resolved, results, rr);
  else if (exp == "inner-check") run_inner_check(config, threads, resolved, results, rr);
  else if (exp == "mu-invariance") run_mu_invariance(config, threads, resolved, results, rr);
  else if (exp == "sample") run_sample(config, threads, resolved, results, rr);
  else if (exp == "dichotomy") run_dichotomy(config, threads, resolved, results, rr);
  else if (exp == "verify-propd") run_verify_propd(config, threads, resolved, results, rr);
  else if (exp == "series-test") run_series_test(config, threads, resolved, results, rr);
  else throw ConfigError("ConfigError", "unknown experiment '" + exp + "'");

  auto t1 = std::chrono::steady_clock::now();
  double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rr.report = json{{"experiment", exp},
                   {"config", resolved},
                   {"version", kVersion},
                   {"seed", seed},
                   {"results", results},
                   {"timing", json{{"wall_ms", ms}}}};
  return rr;
}

}  // namespace bakerlab

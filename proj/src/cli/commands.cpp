#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

#include "pmrig/ball.hpp"
#include "pmrig/cli.hpp"
#include "pmrig/greenpj.hpp"
#include "pmrig/harnack.hpp"

namespace pmrig::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Context {
  std::filesystem::path output_dir;
  std::string name;
  std::vector<std::filesystem::path>* files;
};

using Job = std::function<void(Report&, const Context&)>;

Json cjson(Complex z) { return Json::array({z.real(), z.imag()}); }

Json cjson(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(cjson(v(j)));
  return out;
}

Json rate_json(const RateReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) samples.push_back({s.t, s.value});
  return Json{{"exponent", r.exponent_tested},
              {"fitted_limit", r.fitted_limit},
              {"fitted_slope", r.fitted_slope},
              {"verdict", to_string(r.verdict)},
              {"samples", samples}};
}

Json limit_json(const LimitEstimate& e) {
  return Json{{"limit", e.limit}, {"slope", e.slope}, {"last", e.last}, {"monotone", e.monotone}};
}

Profile rate_profile(const RateReport& r, std::string label) {
  Profile p{std::move(label), {}};
  for (const auto& s : r.samples) {
    const double d = 1.0 - s.t;
    p.rows.emplace_back(d, s.value / std::pow(d, r.exponent_tested));
  }
  return p;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// expect = any passes everything; otherwise the lower-cased verdict must match.
bool expectation_met(const ExperimentConfig& cfg, const std::string& verdict) {
  const std::string e = lower(cfg.get("expect"));
  return e == "any" || e == lower(verdict);
}

void check_choice(const std::string& key, const std::string& value, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (value == a) return;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ConfigError("key '" + key + "': '" + value + "' is not one of " + list);
}

std::vector<double> ladder_schedule(const ExperimentConfig& cfg) {
  const int k_min = cfg.get_int("k_min"), k_max = cfg.get_int("k_max");
  if (k_min < 1 || k_max < k_min + 4 || k_max > 40) throw ConfigError("need 1 <= k_min, k_min + 4 <= k_max <= 40");
  return dyadic_schedule(k_min, k_max);
}

// Ladder from k_min/k_max with per-mode defaults for the value "default".
std::vector<int> geometric_from(const ExperimentConfig& cfg, int k_min_default, int k_max_default) {
  const int k_min = cfg.get("k_min") == "default" ? k_min_default : cfg.get_int("k_min");
  const int k_max = cfg.get("k_max") == "default" ? k_max_default : cfg.get_int("k_max");
  if (k_min < 0 || k_max < k_min + 2 || k_max > 20) throw ConfigError("need 0 <= k_min, k_min + 2 <= k_max <= 20");
  return geometric_ladder(k_min, k_max);
}

std::vector<double> ray_schedule(double lo, double hi) {
  std::vector<double> out;
  for (int k = 1; k <= 30; ++k) {
    const double t = 1.0 - std::ldexp(1.0, -k);
    if (t >= lo && t <= hi) out.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------

Job prepare_verify_harnack(const ExperimentConfig& cfg) {
  struct Case {
    Pseudometric lambda, mu;
    double c, r;
  };
  const std::string suite = cfg.get("suite");
  check_choice("suite", suite, {"none", "catalog"});
  std::vector<Case> cases;
  if (suite == "catalog") {
    const auto p = poincare();
    const std::vector<std::pair<Pseudometric, Pseudometric>> pairs = {
        {scale(0.9, p), p},
        {pullback(maps::power(2), p), p},
        {pullback(HoloMap::blaschke({0.3, Complex(0, -0.5)}), p), p},
        {mu_max(2), mu_max(1)},
        {mu_max(1), p},
        {p, p},
    };
    for (const auto& [l, m] : pairs)
      for (double r : {0.3, 0.5, 0.8}) cases.push_back({l, m, 4.0, r});
  } else {
    cases.push_back({parse_metric(cfg.get("lambda")), parse_metric(cfg.get("mu")), cfg.get_double("c"),
                     cfg.get_double("r")});
  }
  const double r_max = cfg.get_double("r_max"), tol = cfg.get_double("tol");
  const int n_r = cfg.get_int("n_r"), n_t = cfg.get_int("n_t");
  if (!(r_max > 0.0 && r_max < 1.0) || n_r < 2 || n_t < 4) throw ConfigError("need 0 < r_max < 1, n_r >= 2, n_t >= 4");

  return [=](Report& rep, const Context&) {
    rep.pass = true;
    Json list = Json::array();
    for (const auto& cs : cases) {
      const auto pts = polar_sample(r_max, n_r, n_t, cs.r);
      const auto h = check_harnack(cs.lambda, cs.mu, cs.c, cs.r, pts, tol);
      const auto aux = verify_aux_pde(cs.r, cs.c, pts);
      const auto cub = cubic_check(cs.c, cs.r);
      rep.pass = rep.pass && h.pass && aux.pass && cub.pass;
      Json hj{{"pass", h.pass}, {"max_violation", h.lhs_max_violation}, {"circle_max", h.circle_max},
              {"checked", h.checked}};
      if (h.witness) hj["witness"] = cjson(*h.witness);
      list.push_back(Json{{"lambda", cs.lambda.name()},
                          {"mu", cs.mu.name()},
                          {"c", cs.c},
                          {"r", cs.r},
                          {"harnack", hj},
                          {"barrier_pde", {{"pass", aux.pass}, {"min_margin", aux.min_margin}, {"checked", aux.checked}}},
                          {"cubic",
                           {{"pass", cub.pass},
                            {"min_value", cub.min_value},
                            {"argmin", cub.argmin},
                            {"endpoint_r2_exact", cub.endpoint_r2_exact},
                            {"endpoint_one_exact", cub.endpoint_one_exact}}}});
      if (!rep.profile) {
        // Margin below the Harnack bound along the positive real radius.
        Profile p{"log(lambda/mu) - harnack_bound", {}};
        const double k = harnack_constant(cs.r) / std::pow(1.0 - cs.r * cs.r, cs.c / 2.0) * h.circle_max;
        for (double t : ray_schedule(cs.r, r_max)) {
          const double lq = std::log(quotient(cs.lambda, cs.mu, t));
          p.rows.emplace_back(1.0 - t, lq - k * std::pow(1.0 - t * t, cs.c / 2.0));
        }
        if (!p.rows.empty()) rep.profile = std::move(p);
      }
    }
    rep.results["cases"] = list;
    rep.verdict = rep.pass ? "PASS" : "FAIL";
  };
}

Job prepare_golusin(const ExperimentConfig& cfg) {
  const Pseudometric lambda = parse_metric(cfg.get("lambda"));
  const double r_max = cfg.get_double("r_max"), tol = cfg.get_double("tol");
  const int n_r = cfg.get_int("n_r"), n_t = cfg.get_int("n_t");
  if (!(r_max > 0.0 && r_max < 1.0) || n_r < 2 || n_t < 4) throw ConfigError("need 0 < r_max < 1, n_r >= 2, n_t >= 4");
  return [=](Report& rep, const Context&) {
    const auto g = check_golusin(lambda, polar_sample(r_max, n_r, n_t), tol);
    rep.pass = g.pass;
    rep.verdict = g.pass ? "PASS" : "FAIL";
    rep.results = Json{{"lambda", lambda.name()},
                       {"lambda_at_zero", g.lambda_at_zero},
                       {"max_excess", g.max_excess},
                       {"checked", g.checked}};
    if (g.witness) rep.results["witness"] = cjson(*g.witness);
    Profile p{"lambda/lambda_D - bound", {}};
    const auto P = poincare();
    for (double t : ray_schedule(0.5, r_max)) {
      const double s = 2.0 * t / (1.0 + t * t);
      const double bound = (g.lambda_at_zero + s) / (1.0 + g.lambda_at_zero * s);
      p.rows.emplace_back(1.0 - t, quotient(lambda, P, t) - bound);
    }
    rep.profile = std::move(p);
  };
}

Job prepare_rigidity_scan(const ExperimentConfig& cfg) {
  const Pseudometric lambda = parse_metric(cfg.get("lambda")), mu = parse_metric(cfg.get("mu"));
  const double c = cfg.get_double("c");
  BoundaryPath path;
  path.angle = cfg.get_double("angle");
  path.schedule = ladder_schedule(cfg);
  check_choice("expect", lower(cfg.get("expect")), {"any", "vanishes", "bounded_nonzero", "diverges"});
  return [=](Report& rep, const Context&) {
    const auto r = rigidity_scan(lambda, mu, c, path);
    rep.verdict = to_string(r.verdict);
    rep.pass = expectation_met(cfg, rep.verdict);
    rep.results = rate_json(r);
    rep.results["lambda"] = lambda.name();
    rep.results["mu"] = mu.name();
    rep.profile = rate_profile(r, "(lambda/mu - 1)/(1-|z|)^(c/2)");
  };
}

Job prepare_pj_decompose(const ExperimentConfig& cfg) {
  const Pseudometric lambda = parse_metric(cfg.get("lambda"));
  const double R = cfg.get_double("R");
  const auto zs = parse_complex_list(cfg.get("z"));
  PJOptions opts;
  opts.quad.n_r = cfg.get_int("n_r");
  opts.quad.n_t = cfg.get_int("n_t");
  opts.n_boundary = cfg.get_int("n_boundary");
  opts.tol = cfg.get_double("tol");
  std::optional<Pseudometric> mu;
  if (cfg.get("mu") != "none") mu = parse_metric(cfg.get("mu"));
  const Complex xi = parse_complex(cfg.get("xi"));
  for (Complex z : zs)
    if (!(std::abs(z) < R)) throw ConfigError("evaluation points must satisfy |z| < R");

  return [=](Report& rep, const Context&) {
    rep.pass = true;
    Json list = Json::array();
    for (Complex z : zs) {
      const auto d = pj_decompose(lambda, R, z, opts);
      const auto h = harmonic_majorant(lambda, R, z, opts.n_boundary);
      const double gm = green_mean(R, z, opts.quad);
      const double gm_exact = (R * R - std::norm(z)) / 4.0;
      Json zeros = Json::array();
      for (const auto& t : d.zero_terms)
        zeros.push_back(Json{{"location", cjson(t.zero.location)}, {"order", t.zero.order}, {"value", t.value}});
      Json entry{{"z", cjson(z)},
                 {"zero_terms", zeros},
                 {"majorant", d.majorant_value},
                 {"potential", d.potential_value},
                 {"reconstructed_log_density", d.reconstructed_log_density},
                 {"log_density", d.log_density},
                 {"residual", d.residual},
                 {"pass", d.pass},
                 {"majorant_bound", {{"value", h.value}, {"bound", h.bound}, {"within_bound", h.within_bound}}},
                 {"green_mean", {{"value", gm}, {"exact", gm_exact}}}};
      bool ok = d.pass && h.within_bound && std::abs(gm - gm_exact) <= 1e-9;
      if (mu) {
        const auto l = lemma_6_3_bound(lambda, *mu, R, xi, z);
        entry["quotient_bound"] = Json{{"lhs", l.lhs}, {"rhs", l.rhs}, {"alpha", l.alpha},
                                       {"beta", l.beta}, {"c_r", l.c_r}, {"pass", l.pass}};
        ok = ok && l.pass;
      }
      rep.pass = rep.pass && ok;
      list.push_back(entry);
    }
    rep.results["lambda"] = lambda.name();
    rep.results["R"] = R;
    rep.results["points"] = list;
    rep.verdict = rep.pass ? "PASS" : "FAIL";
  };
}

Job prepare_sequence_scan(const ExperimentConfig& cfg) {
  const std::string mode = cfg.get("mode");
  check_choice("mode", mode, {"dichotomy", "schwarz-pick", "witness"});
  const std::string hyp = cfg.get("hypothesis");

  if (mode == "dichotomy") {
    const MetricSequence seq = parse_sequence(cfg.get("sequence"));
    const Pseudometric mu = parse_metric(cfg.get("mu"));
    const double c = cfg.get_double("c");
    const auto zs = parse_point_sequence(hyp == "default" ? "point(0.5)" : hyp);
    DichotomyOptions opts;
    opts.ladder = geometric_from(cfg, 1, 6);
    check_choice("expect", lower(cfg.get("expect")), {"any", "uniform_convergence", "fading_zeros", "inconclusive"});
    return [=](Report& rep, const Context&) {
      const auto d = dichotomy_scan(seq, mu, c, zs, opts);
      rep.verdict = to_string(d.verdict);
      rep.pass = expectation_met(cfg, rep.verdict);
      Json path = Json::array();
      for (const auto& z : d.zero_path) path.push_back(Json{{"n", z.n}, {"location", cjson(z.location)}, {"order", z.order}});
      rep.results = Json{{"sequence", seq.description},
                         {"mu", mu.name()},
                         {"largest_n", d.largest_n},
                         {"boundary_case", d.boundary_case},
                         {"hypothesis_holds", d.hypothesis_holds},
                         {"hypothesis_values", d.hypothesis_values},
                         {"sup_errors", d.sup_errors},
                         {"sup_limit", limit_json(d.sup_limit)},
                         {"zero_path", path},
                         {"order_limit", limit_json(d.order_limit)}};
      if (d.hypothesis_rate) {
        rep.results["hypothesis_rate"] = rate_json(*d.hypothesis_rate);
        rep.profile = rate_profile(*d.hypothesis_rate, "(q_n(z_n) - 1)/(1-|z_n|)^(c/2)");
      }
    };
  }

  if (mode == "schwarz-pick") {
    const auto family = parse_map_family(cfg.get("family"));
    const auto zs = parse_point_sequence(hyp == "default" ? "rim" : hyp);
    const auto ladder = geometric_from(cfg, 2, 12);
    check_choice("expect", lower(cfg.get("expect")),
                 {"any", "automorphism_like", "constant_like", "undetermined", "not_asserted"});
    return [=](Report& rep, const Context&) {
      const auto s = sequential_schwarz_pick(family, zs, ladder);
      rep.verdict = to_string(s.limit_class);
      rep.pass = expectation_met(cfg, rep.verdict);
      rep.results = Json{{"family", cfg.get("family")},
                         {"largest_n", s.largest_n},
                         {"hypothesis_holds", s.hypothesis_holds},
                         {"hypothesis_rate", rate_json(s.hypothesis_rate)},
                         {"sup_deviation", s.sup_deviation},
                         {"deviation_limit", limit_json(s.deviation_limit)},
                         {"min_gap", s.min_gap},
                         {"gap_limit", limit_json(s.gap_limit)}};
      rep.profile = rate_profile(s.hypothesis_rate, "(f_n^h(z_n) - 1)/(1-|z_n|)^2");
    };
  }

  const double a = cfg.get_double("a");
  const Complex z = parse_complex(cfg.get("z"));
  const auto ladder = geometric_from(cfg, 1, 6);
  return [=](Report& rep, const Context&) {
    const auto w = prop_5_7_witness(a, z, ladder);
    rep.pass = w.members_admissible && w.ahlfors_bound;
    rep.verdict = rep.pass ? "PASS" : "FAIL";
    rep.results = Json{{"a", w.a},
                       {"z", cjson(w.z)},
                       {"target", w.target},
                       {"ns", w.ns},
                       {"values", w.values},
                       {"running_max", w.running_max},
                       {"members_admissible", w.members_admissible},
                       {"ahlfors_bound", w.ahlfors_bound}};
  };
}

Job prepare_zero_track(const ExperimentConfig& cfg) {
  const MetricSequence seq = parse_sequence(cfg.get("sequence"));
  const Pseudometric mu = parse_metric(cfg.get("mu"));
  const Complex xi = parse_complex(cfg.get("xi"));
  const auto zs = parse_point_sequence(cfg.get("hypothesis"));
  ZeroTrackOptions opts;
  opts.ladder = geometric_from(cfg, 1, 6);
  opts.tol_order = cfg.get_double("tol_order");
  return [=](Report& rep, const Context&) {
    const auto t = zero_rigidity_track(seq, mu, zs, xi, opts);
    rep.pass = t.part_a && t.part_b;
    rep.verdict = rep.pass ? "PASS" : "FAIL";
    Json approaching = Json::array();
    for (const auto& z : t.approaching)
      approaching.push_back(Json{{"n", z.n}, {"location", cjson(z.location)}, {"order", z.order}});
    rep.results = Json{{"sequence", seq.description},
                       {"mu", mu.name()},
                       {"xi", cjson(t.xi)},
                       {"ns", t.ns},
                       {"quotients", t.quotients},
                       {"beta", t.beta},
                       {"beta_n", t.beta_n},
                       {"beta_n_estimated", t.beta_n_estimated},
                       {"beta_limit", limit_json(t.beta_limit)},
                       {"orders_converge", t.part_a},
                       {"approaching", approaching},
                       {"alpha_limit", limit_json(t.alpha_limit)},
                       {"approaching_orders_vanish", t.part_b}};
  };
}

Job prepare_liouville(const ExperimentConfig& cfg) {
  DirichletProblem problem;
  problem.R = cfg.get_double("R");
  problem.kappa = parse_curvature(cfg.get("kappa"));
  const std::string b = cfg.get("boundary");
  if (b == "poincare") {
    problem.boundary = poincare_boundary(problem.R);
  } else if (b.rfind("constant(", 0) == 0 && b.back() == ')') {
    double u = 0.0;
    try {
      u = std::stod(b.substr(9, b.size() - 10));
    } catch (const std::exception&) {
      throw ConfigError("key 'boundary': malformed constant '" + b + "'");
    }
    problem.boundary = [u](double) { return u; };
  } else {
    throw ConfigError("key 'boundary': expected poincare or constant(u), got '" + b + "'");
  }
  if (cfg.get("zero_xi") != "none")
    problem.zero_factor = ZeroFactor{parse_complex(cfg.get("zero_xi")), cfg.get_double("zero_alpha")};
  SolverOptions opts;
  opts.n = cfg.get_int("n");
  opts.max_iter = cfg.get_int("max_iter");
  opts.tol = cfg.get_double("tol");
  const std::string csv = cfg.get("csv");
  check_choice("csv", csv, {"true", "false"});
  const bool poincare_exact = b == "poincare" && !problem.zero_factor && problem.kappa.name == curvature_constant(-4).name;

  return [=](Report& rep, const Context& ctx) {
    rep.results["kappa"] = problem.kappa.name;
    rep.results["R"] = problem.R;
    rep.results["n"] = opts.n;
    try {
      const auto sol = solve(problem, opts);
      rep.results["iterations"] = sol.iterations;
      rep.results["residual"] = sol.residual;
      rep.results["residual_history"] = sol.residual_history;
      rep.results["clamped_nodes"] = sol.clamped_nodes;
      rep.results["spacing"] = sol.spacing();
      if (poincare_exact) {
        double err = 0.0;
        for (int j = 0; j < sol.n(); ++j)
          for (int i = 0; i < sol.n(); ++i)
            if (sol.inside(i, j))
              err = std::max(err, std::abs(std::exp(sol.node_value(i, j)) - 1.0 / (1.0 - std::norm(sol.node(i, j)))));
        rep.results["poincare_density_error"] = err;
      }
      Profile p{"density", {}};
      for (int k = 1; k <= 10; ++k) {
        const double t = problem.R * (1.0 - std::ldexp(1.0, -k));
        p.rows.emplace_back(1.0 - t, sol.density(t));
      }
      rep.profile = std::move(p);
      if (csv == "true") {
        std::ostringstream os;
        sol.write_csv(os);
        const auto path = ctx.output_dir / (ctx.name + ".csv");
        write_atomic(path, os.str());
        ctx.files->push_back(path);
      }
      rep.pass = true;
      rep.verdict = "CONVERGED";
    } catch (const SolverDivergence& e) {
      rep.results["residual_history"] = e.history;
      throw;
    }
  };
}

CVector to_cvector(const std::vector<Complex>& xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = xs[i];
  return v;
}

CVector unit_cvector(const ExperimentConfig& cfg, const std::string& key) {
  CVector v = to_cvector(parse_complex_list(cfg.get(key)));
  const double n = v.norm();
  if (!(n > 0.0)) throw ConfigError("key '" + key + "': zero vector");
  return v / n;
}

Polynomial as_polynomial(const HoloMap& f, const std::string& text) {
  const Rational q = f.as_rational();
  if (q.den.degree() != 0) throw ConfigError("disc component '" + text + "' is not a polynomial");
  return (1.0 / q.den.coeffs()[0]) * q.num;
}

Job prepare_ball_check(const ExperimentConfig& cfg) {
  const std::string check = cfg.get("check");
  check_choice("check", check, {"boundary-conditions", "geodesic-disc", "aladro", "distance-band"});
  const CVector v = unit_cvector(cfg, "v");
  const auto schedule = ladder_schedule(cfg);

  if (check == "boundary-conditions") {
    BallMap f = BallMap::identity(1);
    try {
      f = parse_ballmap(cfg.get("map"));
    } catch (const Error& e) {
      throw ConfigError(std::string("key 'map': ") + e.what());
    }
    if (f.dim() != v.size()) throw ConfigError("map and v have different dimensions");
    check_choice("expect", lower(cfg.get("expect")), {"any", "pass", "fail"});
    Theorem22Options opts;
    opts.t_ladder = schedule;
    return [=](Report& rep, const Context&) {
      const auto r = theorem_2_2_check(f, v, opts);
      const bool all = r.all_pass();
      rep.verdict = all ? "PASS" : "FAIL";
      rep.pass = expectation_met(cfg, rep.verdict);
      Json seqs = Json::array();
      for (const auto& s : r.sequences)
        seqs.push_back(Json{{"direction", cjson(s.direction)},
                            {"final_gap", s.image_gap.back()},
                            {"reaches_boundary", s.reaches_boundary}});
      rep.results = Json{{"map", to_text(f)},
                         {"v", cjson(v)},
                         {"condition_1", to_string(r.condition_1)},
                         {"condition_2a", to_string(r.condition_2a)},
                         {"condition_2b", to_string(r.condition_2b)},
                         {"deficit", rate_json(r.deficit)},
                         {"image_gap", r.image_gap},
                         {"tangential_norms", r.tangential_norms},
                         {"tangential_slope", r.tangential_slope},
                         {"tangential_sequences", seqs}};
      rep.profile = rate_profile(r.deficit, "(k(F(z);dF v) - k(z;v))/(1-|z|)");
    };
  }

  if (check == "geodesic-disc") {
    AnalyticDisc disc;
    const std::string d = cfg.get("disc");
    if (d == "slice") {
      const CVector p = unit_cvector(cfg, "p");
      if (p.size() != v.size()) throw ConfigError("p and v have different dimensions");
      try {
        disc.components = geodesic_slice(p, v).components();
      } catch (const Error& e) {
        throw ConfigError(std::string("slice: ") + e.what());
      }
    } else {
      std::size_t start = 0;
      while (start <= d.size()) {
        std::size_t end = d.find(';', start);
        if (end == std::string::npos) end = d.size();
        const std::string part = d.substr(start, end - start);
        try {
          disc.components.push_back(as_polynomial(parse_holomap(part), part));
        } catch (const ConfigError&) {
          throw;
        } catch (const Error& e) {
          throw ConfigError("disc component '" + part + "': " + e.what());
        }
        start = end + 1;
      }
    }
    return [=](Report& rep, const Context&) {
      const auto r = prop_7_4_check(disc, schedule);
      rep.verdict = to_string(r.verdict);
      rep.pass = true;
      rep.results = Json{{"sphere_max", r.sphere_max},
                         {"rate", rate_json(r.rate)},
                         {"tangential_norms", r.tangential_norms},
                         {"tangential_bounded", r.tangential_bounded},
                         {"origin_isometry", r.origin_isometry}};
      rep.profile = rate_profile(r.rate, "(k(f(r);f'(r)) - 1/(1-r^2))/(1-r)");
    };
  }

  const CVector u = unit_cvector(cfg, "z");
  if (u.size() != v.size()) throw ConfigError("z and v have different dimensions");
  std::vector<double> deltas;
  for (double t : schedule) deltas.push_back(1.0 - t);

  if (check == "aladro") {
    return [=](Report& rep, const Context&) {
      Profile p{"aladro_ratio", {}};
      rep.pass = true;
      std::vector<double> ratios;
      for (double d : deltas) {
        const double q = aladro_ratio((1.0 - d) * u, v);
        ratios.push_back(q);
        p.rows.emplace_back(d, q);
        rep.pass = rep.pass && q >= 1.0 / kAladroConstant && q <= kAladroConstant;
      }
      rep.verdict = rep.pass ? "PASS" : "FAIL";
      rep.results = Json{{"v", cjson(v)}, {"direction", cjson(u)}, {"constant", kAladroConstant},
                         {"deltas", deltas}, {"ratios", ratios}};
      rep.profile = std::move(p);
    };
  }

  const CVector p0 = to_cvector(parse_complex_list(cfg.get("p0")));
  if (p0.size() != u.size()) throw ConfigError("p0 and z have different dimensions");
  if (!(p0.norm() < 1.0)) throw ConfigError("p0 must lie in the ball");
  const double bound = cfg.get_double("bound");
  return [=](Report& rep, const Context&) {
    const auto band = radial_distance_band(p0, u, deltas);
    rep.pass = band.max_abs <= bound;
    rep.verdict = rep.pass ? "PASS" : "FAIL";
    rep.results = Json{{"p0", cjson(p0)}, {"direction", cjson(u)}, {"bound", bound},
                       {"deltas", band.deltas}, {"values", band.values}, {"max_abs", band.max_abs}};
    Profile p{"K(p0,z) + log(1-|z|)/2", {}};
    for (std::size_t i = 0; i < band.deltas.size(); ++i) p.rows.emplace_back(band.deltas[i], band.values[i]);
    rep.profile = std::move(p);
  };
}

Job prepare_burns_krantz(const ExperimentConfig& cfg) {
  HoloMap f = HoloMap::identity();
  try {
    f = parse_holomap(cfg.get("map"));
  } catch (const Error& e) {
    throw ConfigError(std::string("key 'map': ") + e.what());
  }
  const auto schedule = ladder_schedule(cfg);
  return [=](Report& rep, const Context&) {
    const auto r = burns_krantz_check(f, schedule);
    rep.pass = r.implication_holds;
    rep.verdict = rep.pass ? "PASS" : "FAIL";
    rep.results = Json{{"map", to_text(f)},
                       {"displacement", rate_json(r.displacement)},
                       {"hyperbolic", rate_json(r.hyperbolic)},
                       {"implication_holds", r.implication_holds}};
    rep.profile = rate_profile(r.hyperbolic, "(f^h(t) - 1)/(1-t)^2");
  };
}

Job prepare(const ExperimentConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "verify-harnack") return prepare_verify_harnack(cfg);
  if (c == "golusin") return prepare_golusin(cfg);
  if (c == "rigidity-scan") return prepare_rigidity_scan(cfg);
  if (c == "pj-decompose") return prepare_pj_decompose(cfg);
  if (c == "sequence-scan") return prepare_sequence_scan(cfg);
  if (c == "zero-track") return prepare_zero_track(cfg);
  if (c == "liouville-solve") return prepare_liouville(cfg);
  if (c == "ball-check") return prepare_ball_check(cfg);
  if (c == "burns-krantz") return prepare_burns_krantz(cfg);
  throw ConfigError("unknown command '" + c + "'");
}

}  // namespace

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
  RunResult result;
  Report& rep = result.report;
  rep.command = config.command;

  Job job;
  Context ctx;
  ctx.files = &result.files;
  try {
    rep.name = config.get("name");
    if (rep.name.empty() || rep.name.find_first_of("/\\") != std::string::npos)
      throw ConfigError("key 'name': must be a plain file name");
    rep.parameters = config.effective();
    rep.parameters.erase("output_dir");
    if (options.output_dir)
      ctx.output_dir = *options.output_dir;
    else if (config.get("output_dir") != "default")
      ctx.output_dir = config.get("output_dir");
    else
      ctx.output_dir = default_output_dir();
    ctx.name = rep.name;
    job = prepare(config);
  } catch (const Error& e) {
    rep.error = e.what();
    rep.verdict = "INVALID_CONFIG";
    result.exit_code = kExitInvalidConfig;
    return result;
  }

  try {
    std::filesystem::create_directories(ctx.output_dir);
  } catch (const std::exception& e) {
    rep.error = std::string("cannot create output directory: ") + e.what();
    rep.verdict = "INVALID_CONFIG";
    result.exit_code = kExitInvalidConfig;
    return result;
  }

  try {
    job(rep, ctx);
  } catch (const Error& e) {
    rep.error = e.what();
    rep.pass = false;
    rep.verdict = "ERROR";
  }

  try {
    const auto json_path = ctx.output_dir / (rep.name + ".json");
    write_atomic(json_path, to_json(rep).dump(2) + "\n");
    result.files.insert(result.files.begin(), json_path);
    if (rep.profile) {
      const auto prof = ctx.output_dir / (rep.name + ".profile.dat");
      emit_profile(rep, prof);
      result.files.push_back(prof);
      result.files.push_back(std::filesystem::path(prof.string() + ".json"));
    }
  } catch (const Error& e) {
    rep.error = e.what();
    result.exit_code = kExitInvalidConfig;
    return result;
  }

  result.exit_code = rep.pass ? kExitPass : kExitCheckFailed;
  if (options.log) {
    *options.log << rep.name << ": " << rep.verdict << (rep.pass ? " (pass)" : " (fail)") << "\n";
    if (rep.error) *options.log << "  error: " << *rep.error << "\n";
    for (const auto& f : result.files) *options.log << "  wrote " << f.string() << "\n";
  }
  return result;
}

}  // namespace pmrig::cli

#include "kamreduce/serialization.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include "kamreduce/error.hpp"
#include "kamreduce/theta_grid.hpp"

namespace kam {

namespace {

const char* kind_name(CoeffKind k) {
  switch (k) {
    case CoeffKind::kScalar:
      return "scalar";
    case CoeffKind::kVector:
      return "vector";
    case CoeffKind::kMatrix:
      return "matrix";
  }
  return "scalar";
}

CoeffKind kind_from_name(const std::string& s) {
  if (s == "scalar") return CoeffKind::kScalar;
  if (s == "vector") return CoeffKind::kVector;
  if (s == "matrix") return CoeffKind::kMatrix;
  throw ConfigError("unknown coefficient kind '" + s + "'");
}

// Non-finite doubles are encoded as null.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
double num_or_inf(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

Json complex_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }
Complex complex_from(const Json& j) {
  if (j.is_array()) return {j.at(0).get<double>(), j.size() > 1 ? j.at(1).get<double>() : 0.0};
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at("re").get<double>(), j.value("im", 0.0)};
}

Json matrix_json(const CMat& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ri = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"re", re}, {"im", im}};
}

CMat matrix_from(const Json& j) {
  const Json& re = j.at("re");
  const int rows = static_cast<int>(re.size());
  const int cols = rows ? static_cast<int>(re.at(0).size()) : 0;
  CMat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double im = j.contains("im") ? j["im"].at(r).at(c).get<double>() : 0.0;
      m(r, c) = Complex(re.at(r).at(c).get<double>(), im);
    }
  }
  return m;
}

template <class T>
T get_or(const Json& j, const char* key, T def) {
  return j.contains(key) && !j[key].is_null() ? j[key].get<T>() : def;
}

Json check_json(const BoundCheck& b) {
  return {{"name", b.name}, {"value", num(b.value)}, {"bound", b.bound}, {"pass", b.pass}};
}

Json diag_json(const StepDiagnostics& s) {
  return {{"m", s.m},
          {"eps", s.eps},
          {"s", s.s},
          {"K", num(s.K)},
          {"K_eff", s.K_eff},
          {"gamma", s.gamma},
          {"qprime_norm", num(s.qprime_norm)},
          {"eps_qprime", num(s.eps_qprime)},
          {"min_margin", num(s.min_margin)},
          {"f_norm", num(s.f_norm)},
          {"N_inc_norm", num(s.N_inc_norm)},
          {"e_inc", num(s.e_inc)},
          {"remainder_norm", num(s.remainder_norm)},
          {"residual", num(s.residual)},
          {"map_distance", num(s.map_distance)},
          {"symplectic_defect", num(s.symplectic_defect)},
          {"trunc_defect", num(s.trunc_defect)},
          {"lie_terms", s.lie_terms},
          {"eig_drift", num(s.eig_drift)},
          {"warnings", s.warnings}};
}

StepDiagnostics diag_from(const Json& j) {
  StepDiagnostics s;
  s.m = j.at("m").get<int>();
  s.eps = j.at("eps").get<double>();
  s.s = j.at("s").get<double>();
  s.K = num_or_inf(j.at("K"));
  s.K_eff = j.at("K_eff").get<int>();
  s.gamma = j.at("gamma").get<double>();
  s.qprime_norm = num_or_inf(j.at("qprime_norm"));
  s.eps_qprime = num_or_inf(j.at("eps_qprime"));
  s.min_margin = num_or_inf(j.at("min_margin"));
  s.f_norm = num_or_inf(j.at("f_norm"));
  s.N_inc_norm = num_or_inf(j.at("N_inc_norm"));
  s.e_inc = num_or_inf(j.at("e_inc"));
  s.remainder_norm = num_or_inf(j.at("remainder_norm"));
  s.residual = num_or_inf(j.at("residual"));
  s.map_distance = num_or_inf(j.at("map_distance"));
  s.symplectic_defect = num_or_inf(j.at("symplectic_defect"));
  s.trunc_defect = num_or_inf(j.at("trunc_defect"));
  s.lie_terms = j.at("lie_terms").get<int>();
  s.eig_drift = num_or_inf(j.at("eig_drift"));
  s.warnings = j.at("warnings").get<int>();
  return s;
}

[[noreturn]] void config_fail(const std::string& what) { throw ConfigError("config: " + what); }

}  // namespace

Json to_json(const FourierSeries& f) {
  Json coeffs = Json::array();
  for (const auto& [k, c] : f.coeffs()) {
    Json re = Json::array(), im = Json::array();
    for (int r = 0; r < f.rows(); ++r) {
      for (int col = 0; col < f.cols(); ++col) {
        re.push_back(c(r, col).real());
        im.push_back(c(r, col).imag());
      }
    }
    coeffs.push_back({{"k", k.to_vector()}, {"re", re}, {"im", im}});
  }
  return {{"n", f.dim()},
          {"kind", kind_name(f.kind())},
          {"shape", {f.rows(), f.cols()}},
          {"coeffs", coeffs}};
}

FourierSeries series_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  const auto shape = j.at("shape").get<std::vector<int>>();
  if (shape.size() != 2) config_fail("series shape must have two entries");
  return series_from_json(j, n, kind_from_name(j.at("kind").get<std::string>()), shape[0],
                          shape[1]);
}

FourierSeries series_from_json(const Json& j, int n, CoeffKind kind, int rows, int cols) {
  if (j.contains("n") && j["n"].get<int>() != n) config_fail("series dimension n mismatch");
  if (j.contains("shape") && j["shape"].get<std::vector<int>>() != std::vector<int>{rows, cols}) {
    config_fail("series shape mismatch, expected [" + std::to_string(rows) + ", " +
                std::to_string(cols) + "]");
  }
  FourierSeries f(n, kind, rows, cols);
  for (const auto& e : j.at("coeffs")) {
    const auto k = e.at("k").get<std::vector<int>>();
    if (static_cast<int>(k.size()) != n) config_fail("multi-index length must equal n");
    const auto re = e.at("re").get<std::vector<double>>();
    const auto im = e.contains("im") ? e["im"].get<std::vector<double>>()
                                     : std::vector<double>(re.size(), 0.0);
    if (static_cast<int>(re.size()) != rows * cols || im.size() != re.size()) {
      config_fail("coefficient length must equal rows*cols = " + std::to_string(rows * cols));
    }
    CMat c(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int col = 0; col < cols; ++col) {
        c(r, col) = Complex(re[r * cols + col], im[r * cols + col]);
      }
    }
    f.add(MultiIndex(k), c);
  }
  return f;
}

Json to_json(const QuadraticSymbol& q) {
  return {{"n", q.n},         {"d", q.d},
          {"reality", to_string(q.reality)},
          {"zz", to_json(q.zz)},       {"zzbar", to_json(q.zzbar)},
          {"zbarzbar", to_json(q.zbzb)}, {"z", to_json(q.z)},
          {"zbar", to_json(q.zbar)},   {"theta", to_json(q.theta)}};
}

QuadraticSymbol symbol_from_json(const Json& j) {
  QuadraticSymbol q(j.at("n").get<int>(), j.at("d").get<int>(),
                    reality_from_string(j.at("reality").get<std::string>()));
  q.zz = series_from_json(j.at("zz"));
  q.zzbar = series_from_json(j.at("zzbar"));
  q.zbzb = series_from_json(j.at("zbarzbar"));
  q.z = series_from_json(j.at("z"));
  q.zbar = series_from_json(j.at("zbar"));
  q.theta = series_from_json(j.at("theta"));
  return q;
}

Json to_json(const RealBlocks& w) {
  return {{"xx", to_json(w.xx)}, {"xxi", to_json(w.xxi)}, {"xixi", to_json(w.xixi)},
          {"x", to_json(w.x)},   {"xi", to_json(w.xi)},   {"theta", to_json(w.theta)}};
}

RealBlocks real_blocks_from_json(const Json& j, int n, int d) {
  RealBlocks w(n, d);
  auto read = [&](const char* key, FourierSeries& f, CoeffKind kind, int r, int c) {
    if (j.contains(key)) f = series_from_json(j[key], n, kind, r, c);
  };
  read("xx", w.xx, CoeffKind::kMatrix, d, d);
  read("xxi", w.xxi, CoeffKind::kMatrix, d, d);
  read("xixi", w.xixi, CoeffKind::kMatrix, d, d);
  read("x", w.x, CoeffKind::kVector, d, 1);
  read("xi", w.xi, CoeffKind::kVector, d, 1);
  read("theta", w.theta, CoeffKind::kScalar, 1, 1);
  for (const auto& [key, val] : j.items()) {
    if (key != "xx" && key != "xxi" && key != "xixi" && key != "x" && key != "xi" &&
        key != "theta") {
      config_fail("unknown W block '" + key + "'");
    }
  }
  return w;
}

Json to_json(const ThetaAffineMap& m) {
  return {{"n", m.n},
          {"d", m.d},
          {"rep", m.rep == MapRep::kComplexZZbar ? "complex_zzbar" : "real_xxi"},
          {"linear", to_json(m.linear)},
          {"shift", to_json(m.shift)}};
}

ThetaAffineMap map_from_json(const Json& j) {
  ThetaAffineMap m;
  m.n = j.at("n").get<int>();
  m.d = j.at("d").get<int>();
  const auto rep = j.at("rep").get<std::string>();
  if (rep != "complex_zzbar" && rep != "real_xxi") config_fail("unknown map rep '" + rep + "'");
  m.rep = rep == "complex_zzbar" ? MapRep::kComplexZZbar : MapRep::kRealXXi;
  m.linear = series_from_json(j.at("linear"), m.n, CoeffKind::kMatrix, 2 * m.d, 2 * m.d);
  m.shift = series_from_json(j.at("shift"), m.n, CoeffKind::kVector, 2 * m.d, 1);
  return m;
}

Config config_from_json(const Json& j) {
  try {
    if (j.value("schema", std::string(kSchemaVersion)) != kSchemaVersion) {
      config_fail("unsupported schema version");
    }
    Config c;
    const Json& p = j.at("problem");
    c.problem.n = p.at("n").get<int>();
    c.problem.d = p.at("d").get<int>();
    if (c.problem.n < 1 || c.problem.n > kMaxTorusDim) config_fail("1 <= n <= 4 violated");
    if (c.problem.d < 1) config_fail("d >= 1 violated");
    c.problem.v = p.at("v").get<std::vector<double>>();
    c.problem.omega = p.at("omega").get<std::vector<double>>();
    c.problem.epsilon = p.at("epsilon").get<double>();
    c.problem.W = real_blocks_from_json(p.value("W", Json::object()), c.problem.n, c.problem.d);
    validate(c.problem);

    const Json s = j.value("schedule", Json::object());
    c.schedule.eps0 = get_or(s, "eps0", c.problem.epsilon);
    c.schedule.rho = get_or(s, "rho", c.schedule.rho);
    c.schedule.ell = get_or(s, "ell", c.schedule.ell);
    c.schedule.beta = get_or(s, "beta", c.schedule.beta);
    c.schedule.gamma0 = get_or(s, "gamma0", c.schedule.gamma0);
    c.schedule.eps_star = get_or(s, "eps_star", c.schedule.eps_star);
    if (s.contains("tau") && !s["tau"].is_null()) c.schedule.tau = s["tau"].get<double>();
    if (auto v = schedule_violations(c.schedule, c.problem.n); !v.empty()) {
      throw ScheduleError("config: schedule window: " + v.front());
    }

    const Json l = j.value("limits", Json::object());
    c.limits.max_steps = get_or(l, "max_steps", c.limits.max_steps);
    c.limits.stop_tol = get_or(l, "stop_tol", c.limits.stop_tol);
    c.limits.kmax_cap = get_or(l, "kmax_cap", c.limits.kmax_cap);
    c.limits.theta_grid = get_or(l, "theta_grid", c.limits.theta_grid);
    c.limits.divergence_factor = get_or(l, "divergence_factor", c.limits.divergence_factor);
    c.limits.lie_tol = get_or(l, "lie_tol", c.limits.lie_tol);
    if (c.limits.max_steps < 0) config_fail("limits.max_steps >= 0 violated");
    if (!(c.limits.stop_tol > 0.0)) config_fail("limits.stop_tol > 0 violated");
    if (c.limits.kmax_cap < 1) config_fail("limits.kmax_cap >= 1 violated");
    if (c.limits.theta_grid < 2 || (c.limits.theta_grid & (c.limits.theta_grid - 1)) != 0) {
      config_fail("limits.theta_grid must be a power of two >= 2");
    }

    c.rng_seed = get_or<std::uint64_t>(j, "rng_seed", c.rng_seed);

    const Json v = j.value("verify", Json::object());
    if (v.contains("z0")) {
      for (const auto& z : v["z0"]) c.verify.z0.push_back(complex_from(z));
    } else {
      c.verify.z0.assign(static_cast<std::size_t>(c.problem.d), Complex(1.0, 0.0));
    }
    if (static_cast<int>(c.verify.z0.size()) != c.problem.d) config_fail("verify.z0 needs d entries");
    c.verify.T = get_or(v, "T", c.verify.T);
    c.verify.dt = get_or(v, "dt", c.verify.dt);
    c.verify.tolerance = get_or(v, "tolerance", c.verify.tolerance);
    if (!(c.verify.dt > 0.0) || !(c.verify.T >= 0.0)) config_fail("verify needs dt > 0, T >= 0");

    const Json sc = j.value("scan", Json::object());
    c.scan.omega_min = get_or(sc, "omega_min", std::vector<double>(c.problem.n, 0.0));
    c.scan.omega_max =
        get_or(sc, "omega_max", std::vector<double>(c.problem.n, 2.0 * 3.14159265358979323846));
    c.scan.points_per_axis = get_or(sc, "points_per_axis", c.scan.points_per_axis);
    c.scan.K = get_or(sc, "K", c.scan.K);
    c.scan.gamma = get_or(sc, "gamma", c.scan.gamma);
    c.scan.mc_samples = get_or<std::uint64_t>(sc, "mc_samples", c.scan.mc_samples);
    if (static_cast<int>(c.scan.omega_min.size()) != c.problem.n ||
        static_cast<int>(c.scan.omega_max.size()) != c.problem.n) {
      config_fail("scan.omega_min/omega_max need n entries");
    }
    if (c.scan.points_per_axis < 1) config_fail("scan.points_per_axis >= 1 violated");
    if (std::pow(static_cast<double>(c.scan.points_per_axis), c.problem.n) > 1e6) {
      config_fail("scan grid must have at most 1e6 points");
    }
    if (c.scan.K < 1) config_fail("scan.K >= 1 violated");
    if (c.scan.gamma < 0.0) config_fail("scan.gamma >= 0 violated");
    return c;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON field: ") + e.what());
  }
}

Json to_json(const Config& c) {
  Json sched = {{"eps0", c.schedule.eps0},   {"rho", c.schedule.rho},
                {"ell", c.schedule.ell},     {"beta", c.schedule.beta},
                {"gamma0", c.schedule.gamma0}, {"eps_star", c.schedule.eps_star}};
  if (c.schedule.tau) sched["tau"] = *c.schedule.tau;
  Json z0 = Json::array();
  for (auto z : c.verify.z0) z0.push_back(complex_json(z));
  return {{"schema", kSchemaVersion},
          {"problem",
           {{"n", c.problem.n},
            {"d", c.problem.d},
            {"v", c.problem.v},
            {"omega", c.problem.omega},
            {"epsilon", c.problem.epsilon},
            {"W", to_json(c.problem.W)}}},
          {"schedule", sched},
          {"limits",
           {{"max_steps", c.limits.max_steps},
            {"stop_tol", c.limits.stop_tol},
            {"kmax_cap", c.limits.kmax_cap},
            {"theta_grid", c.limits.theta_grid},
            {"divergence_factor", c.limits.divergence_factor},
            {"lie_tol", c.limits.lie_tol}}},
          {"rng_seed", c.rng_seed},
          {"verify", {{"z0", z0}, {"T", c.verify.T}, {"dt", c.verify.dt},
                      {"tolerance", c.verify.tolerance}}},
          {"scan",
           {{"omega_min", c.scan.omega_min},
            {"omega_max", c.scan.omega_max},
            {"points_per_axis", c.scan.points_per_axis},
            {"K", c.scan.K},
            {"gamma", c.scan.gamma},
            {"mc_samples", c.scan.mc_samples}}}};
}

Json to_json(const DiophantineReport& r) {
  return {{"admissible", r.admissible},
          {"K", r.K},
          {"gamma", r.gamma},
          {"tau", r.tau},
          {"worst_k", r.worst_k.to_vector()},
          {"worst_family", to_string(r.worst_family)},
          {"worst_divisor", num(r.worst_divisor)},
          {"min_margin", num(r.min_margin)}};
}

Json to_json(const RunReport& r) {
  Json bounds = Json::array(), hist = Json::array();
  for (const auto& b : r.bounds) bounds.push_back(check_json(b));
  for (const auto& h : r.history) hist.push_back(diag_json(h));
  Json j = {{"schema", kSchemaVersion},
            {"kind", "run_report"},
            {"status", r.status},
            {"converged", r.converged},
            {"error", r.error},
            {"steps", r.steps},
            {"eps0", r.eps0},
            {"e_inf", complex_json(r.e_inf)},
            {"N_inf", matrix_json(r.N_inf)},
            {"v", r.v},
            {"v_inf", r.v_inf},
            {"bounds", bounds},
            {"bounds_ok", r.bounds_ok()},
            {"warnings", r.warnings},
            {"decomposition_residual", r.decomposition_residual},
            {"history", hist},
            {"conjugacy", to_json(r.phi)},
            {"limit", nullptr},
            {"last_admissibility", nullptr}};
  if (r.limit) {
    j["limit"] = {{"A", to_json(r.limit->A)},
                  {"V", to_json(r.limit->V)},
                  {"hamiltonian_defect", r.limit->hamiltonian_defect},
                  {"reconstruction_error", r.limit->reconstruction_error}};
  }
  if (r.last_admissibility) j["last_admissibility"] = to_json(*r.last_admissibility);
  return j;
}

RunReport run_report_from_json(const Json& j) {
  try {
    if (j.at("schema").get<std::string>() != kSchemaVersion) config_fail("report schema version");
    RunReport r;
    r.status = j.at("status").get<std::string>();
    r.converged = j.at("converged").get<bool>();
    r.error = j.value("error", std::string());
    r.steps = j.at("steps").get<int>();
    r.eps0 = j.at("eps0").get<double>();
    r.e_inf = complex_from(j.at("e_inf"));
    r.N_inf = matrix_from(j.at("N_inf"));
    r.v = j.at("v").get<std::vector<double>>();
    r.v_inf = j.at("v_inf").get<std::vector<double>>();
    r.warnings = j.value("warnings", std::vector<std::string>{});
    r.decomposition_residual = j.value("decomposition_residual", 0.0);
    for (const auto& h : j.at("history")) r.history.push_back(diag_from(h));
    r.phi = map_from_json(j.at("conjugacy"));
    if (!j.at("limit").is_null()) {
      const Json& l = j["limit"];
      LimitMap lm;
      lm.composed = r.phi;
      lm.A = series_from_json(l.at("A"));
      lm.V = series_from_json(l.at("V"));
      lm.hamiltonian_defect = l.at("hamiltonian_defect").get<double>();
      lm.reconstruction_error = l.at("reconstruction_error").get<double>();
      r.limit = lm;
    }
    for (const auto& b : j.at("bounds")) {
      r.bounds.push_back({b.at("name").get<std::string>(), num_or_inf(b.at("value")),
                          b.at("bound").get<double>(), b.at("pass").get<bool>()});
    }
    return r;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("report: malformed JSON field: ") + e.what());
  }
}

Json to_json(const ConjugacyReport& c, double tolerance) {
  Json checks = Json::array();
  for (const auto& b : c.bound_checks) checks.push_back(check_json(b));
  return {{"schema", kSchemaVersion},
          {"kind", "conjugacy_report"},
          {"sup_defect", num(c.sup_defect)},
          {"tolerance", tolerance},
          {"richardson_error", c.richardson_error},
          {"energy_drift", c.energy_drift},
          {"samples", c.times.size()},
          {"bound_checks", checks},
          {"pass", c.bounds_ok() && c.sup_defect <= tolerance}};
}

void write_steps_csv(std::ostream& os, const std::vector<StepDiagnostics>& h) {
  os << "m,eps,s,K,K_eff,gamma,qprime_norm,eps_qprime,min_margin,f_norm,N_inc_norm,e_inc,"
        "remainder_norm,residual,map_distance,symplectic_defect,trunc_defect,lie_terms,"
        "eig_drift,warnings\n";
  os << std::setprecision(17);
  for (const auto& s : h) {
    os << s.m << ',' << s.eps << ',' << s.s << ',' << s.K << ',' << s.K_eff << ',' << s.gamma
       << ',' << s.qprime_norm << ',' << s.eps_qprime << ',' << s.min_margin << ',' << s.f_norm
       << ',' << s.N_inc_norm << ',' << s.e_inc << ',' << s.remainder_norm << ',' << s.residual
       << ',' << s.map_distance << ',' << s.symplectic_defect << ',' << s.trunc_defect << ','
       << s.lie_terms << ',' << s.eig_drift << ',' << s.warnings << '\n';
  }
}

void write_defect_csv(std::ostream& os, const ConjugacyReport& c) {
  os << "t,defect\n" << std::setprecision(17);
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    os << c.times[i] << ',' << c.defect_series[i] << '\n';
  }
}

void write_map_csv(std::ostream& os, const ThetaAffineMap& m, int points_per_axis) {
  const ThetaAffineMap r = to_real(m);
  const ThetaGrid grid(m.n, points_per_axis);
  const int D = 2 * m.d;
  for (int j = 0; j < m.n; ++j) os << "theta" << j + 1 << ',';
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) os << "M_" << a << '_' << b << ',';
  for (int a = 0; a < D; ++a) os << "c_" << a << (a + 1 < D ? "," : "\n");
  os << std::setprecision(17);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto th = grid.theta(p);
    const CMat M = r.linear.evaluate(th);
    const CMat c = r.shift.evaluate(th);
    for (double t : th) os << t << ',';
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) os << M(a, b).real() << ',';
    for (int a = 0; a < D; ++a) os << c(a, 0).real() << (a + 1 < D ? "," : "\n");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace kam

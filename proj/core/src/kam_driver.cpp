#include "kamreduce/kam_driver.hpp"

#include <algorithm>
#include <cmath>

#include "kamreduce/error.hpp"
#include "kamreduce/theta_grid.hpp"

namespace kam {

QuadraticSymbol original_symbol(const Problem& p) {
  CMat N = CMat::Zero(p.d, p.d);
  for (int j = 0; j < p.d; ++j) N(j, j) = p.v[j];
  return normal_form_symbol(p.n, N, 0.0) + from_real_blocks(p.W) * p.epsilon;
}

void validate(const Problem& p) {
  if (p.n < 1 || p.n > kMaxTorusDim) throw ConfigError("n must be in [1, 4]");
  if (p.d < 1) throw ConfigError("d must be >= 1");
  if (static_cast<int>(p.v.size()) != p.d) throw ConfigError("v must have d entries");
  if (static_cast<int>(p.omega.size()) != p.n) throw ConfigError("omega must have n entries");
  for (double x : p.v) {
    if (!(x > 0.0)) throw ConfigError("v_j >= v0 > 0 violated");
  }
  if (!(p.epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  if (p.W.n != p.n || p.W.d != p.d) throw ConfigError("W block dimensions do not match (n, d)");
  for (const auto* b : {&p.W.xx, &p.W.xxi, &p.W.xixi, &p.W.x, &p.W.xi, &p.W.theta}) {
    if (!is_real_valued(*b)) throw ConfigError("W must be real: W(-k) = conj W(k) violated");
  }
}

StepState initial_state(const std::vector<double>& v, const QuadraticSymbol& q0_first) {
  StepState s;
  s.m = 0;
  s.h = NormalForm::diagonal(v);
  s.q = QuadraticSymbol(q0_first.n, q0_first.d, Reality::kRe);
  s.q_prime = q0_first;
  s.phi_tilde = ThetaAffineMap::identity(q0_first.n, q0_first.d);
  return s;
}

StepResult kam_step(const StepState& state, const QuadraticSymbol& q0_next,
                    const Schedule& sched, const StepContext& ctx) {
  const int m = state.m;
  if (m + 1 >= sched.steps()) throw ScheduleError("schedule exhausted at step " + std::to_string(m));
  const int n = state.q_prime.n, d = state.q_prime.d;
  const int cap = ctx.limits.kmax_cap;
  const double eps = sched.eps[m];
  StepDiagnostics diag;
  diag.m = m;
  diag.eps = eps;
  diag.s = sched.s[m];
  diag.K = sched.K[m];
  diag.gamma = sched.gamma[m];
  diag.K_eff = static_cast<int>(std::min<double>(std::floor(sched.K[m]), cap));
  diag.qprime_norm = strip_norm(state.q_prime, sched.s[m]);
  diag.eps_qprime = eps * diag.qprime_norm;

  // Eigenvalue drift hypothesis.
  const double v0 = *std::min_element(ctx.v.begin(), ctx.v.end());
  const double drift_bound = std::min(1.0, v0) / std::max(8.0 * n, 2.0 * d);
  for (int i = 0; i < d; ++i) {
    diag.eig_drift = std::max(diag.eig_drift, std::abs(state.h.eigs(i) - ctx.v[i]));
  }
  if (!(diag.eig_drift < drift_bound)) {
    throw Error("eigenvalue drift " + std::to_string(diag.eig_drift) +
                " violates min(1, v0)/max(8n, 2d) = " + std::to_string(drift_bound));
  }

  const std::vector<double> eigs(state.h.eigs.data(), state.h.eigs.data() + d);
  AdmissibilityOptions aopt;
  aopt.v0 = v0;
  const DiophantineReport adm =
      check_admissible(ctx.omega, eigs, diag.K_eff, diag.gamma, sched.tau, aopt);
  diag.min_margin = adm.min_margin;
  if (!adm.admissible) {
    const int ord = adm.worst_k.order();
    throw SmallDivisorError(adm.worst_k.to_vector(), to_string(adm.worst_family),
                            adm.worst_divisor,
                            diag.gamma / (ord == 0 ? 1.0 : 1.0 + std::pow(ord, sched.tau)));
  }

  StepResult out;
  HomologyOptions hopt;
  hopt.Kmax = cap;
  hopt.strip = sched.s1[m];
  out.solution = solve_homological(state.h, state.q_prime, ctx.omega, diag.K_eff, diag.gamma,
                                   sched.tau, eps, hopt);
  const HomologySolution& sol = out.solution;
  const QuadraticSymbol& f = sol.f;
  diag.f_norm = strip_norm(f, sched.s1[m]);
  diag.N_inc_norm = sol.N_inc.cwiseAbs().colwise().sum().maxCoeff();
  diag.e_inc = std::abs(sol.e_inc);
  diag.remainder_norm = strip_norm(sol.remainder, sched.s1[m]);
  diag.residual = sol.residual_norm;

  FlowOptions fopt;
  fopt.Kmax = cap;
  fopt.min_grid = ctx.limits.theta_grid;
  out.phi = time_one_map(f, eps, fopt);
  diag.map_distance = distance_from_identity(out.phi);
  diag.symplectic_defect = symplectic_defect(out.phi);

  // Second-order terms of (h + eps q') o Phi - eps int (omega.d f) o X^kappa.
  double dropped = 0.0;
  const QuadraticSymbol hs = normal_form_symbol(n, state.h.N, 0.0);
  QuadraticSymbol dtf = f;
  for (auto* b : {&dtf.zz, &dtf.zzbar, &dtf.zbzb, &dtf.z, &dtf.zbar, &dtf.theta}) {
    *b = omega_derivative(*b, ctx.omega);
  }
  BracketResult hf = poisson_bracket(hs, f, cap);
  BracketResult g1 = poisson_bracket(hf.value - dtf, f, cap);
  BracketResult g2 = poisson_bracket(state.q_prime, f, cap);
  dropped += hf.dropped_norm + g1.dropped_norm + g2.dropped_norm;
  const double tol = ctx.limits.lie_tol;
  LieResult l1 = lie_transform(g1.value, f, eps, LieWeight::kOneMinusKappa, tol, cap);
  LieResult l2 = lie_transform(g2.value, f, eps, LieWeight::kOne, tol, cap);
  dropped += l1.dropped_norm + l2.dropped_norm;
  diag.lie_terms = std::max(l1.terms, l2.terms);

  QuadraticSymbol P = sol.remainder + (l1.value + l2.value) * (eps * eps);
  P.reality = Reality::kRe;
  out.new_perturbation = P;

  StepState& nx = out.next;
  nx.m = m + 1;
  nx.h = NormalForm(state.h.N + sol.N_inc, state.h.e + sol.e_inc);
  nx.q = P * (1.0 / sched.eps[m + 1]);
  nx.q.reality = Reality::kRe;
  MapProduct pt = compose(state.phi_tilde, out.phi, cap);
  dropped += pt.dropped_norm;
  nx.phi_tilde = std::move(pt.value);
  nx.q_prime = nx.q;
  if (!q0_next.is_zero()) {
    BracketResult pb = pullback(q0_next, nx.phi_tilde, cap);
    dropped += pb.dropped_norm;
    nx.q_prime += pb.value;
  }
  nx.q_prime.reality = Reality::kRe;
  diag.trunc_defect = dropped;
  diag.warnings = static_cast<int>(sol.warnings.size());
  nx.history = state.history;
  nx.history.push_back(diag);
  nx.warnings = state.warnings;
  for (const auto& w : sol.warnings) nx.warnings.push_back("step " + std::to_string(m) + ": " + w);
  return out;
}

bool RunReport::bounds_ok() const {
  if (bounds.empty()) return false;
  return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.pass; });
}

std::vector<BoundCheck> bound_checks(const RunReport& r) {
  std::vector<BoundCheck> out;
  const double half = std::sqrt(r.eps0), quarter = std::pow(r.eps0, 0.25);
  auto add = [&](const std::string& name, double value, double bound) {
    out.push_back({name, value, bound, value <= bound});
  };
  add("e_inf", std::abs(r.e_inf), half);
  double dv = 0.0;
  for (std::size_t j = 0; j < r.v.size() && j < r.v_inf.size(); ++j) {
    dv = std::max(dv, std::abs(r.v_inf[j] - r.v[j]));
  }
  add("v_inf_minus_v", dv, half);
  add("phi_minus_id", distance_from_identity(r.phi), quarter);
  if (r.limit) {
    double a = 0.0, vv = 0.0;
    const int G = grid_for_radius(std::max(r.limit->A.axis_radius(), r.limit->V.axis_radius()), 8);
    const ThetaGrid grid(r.limit->A.dim(), G);
    for (const auto& A : grid.synthesize(r.limit->A)) {
      a = std::max(a, A.cwiseAbs().colwise().sum().maxCoeff());
    }
    for (const auto& V : grid.synthesize(r.limit->V)) vv = std::max(vv, V.norm());
    add("A_inf_sup", a, quarter);
    add("V_inf_sup", vv, quarter);
  }
  return out;
}

RunReport run(const Problem& problem, const ScheduleParams& sp, const Limits& limits) {
  validate(problem);
  RunReport rep;
  const int n = problem.n, d = problem.d;
  rep.eps0 = sp.eps0;
  rep.v = problem.v;
  std::sort(rep.v.begin(), rep.v.end());
  for (std::size_t i = 1; i < rep.v.size(); ++i) {
    if (rep.v[i] - rep.v[i - 1] < sp.gamma0) {
      throw ConfigError("pairwise frequency gaps >= gamma0 violated");
    }
  }
  const Schedule sched = make_schedule(sp, n, limits.max_steps + 2);
  rep.warnings = sched.warnings;
  const double gamma_max = std::pow(3.0, -2.0 * (n + 3)) / (n * std::pow(d, 4));
  if (sp.gamma0 >= gamma_max) {
    rep.warnings.push_back("gamma0 above the sufficient smallness threshold 3^(-2(n+3)) n^-1 d^-4 = " +
                           std::to_string(gamma_max));
  }

  const QuadraticSymbol q0 = from_real_blocks(problem.W) * problem.epsilon;
  const int M = std::min(limits.max_steps + 1, sched.steps());
  const Decomposition dec = decompose(q0, sched, M);
  rep.decomposition_residual = dec.residual_norm;
  if (dec.residual_norm > 0.0) {
    rep.warnings.push_back("smoothing decomposition leaves residual " +
                           std::to_string(dec.residual_norm));
  }

  StepContext ctx{problem.omega, rep.v, limits};
  StepState state = initial_state(problem.v, dec.parts[0]);
  rep.phi = state.phi_tilde;
  rep.status = "max_steps";
  int increases = 0;
  double prev = -1.0;
  std::vector<double> level;
  try {
    for (int m = 0; m <= limits.max_steps; ++m) {
      const double eq = sched.eps[m] * strip_norm(state.q_prime, sched.s[m]);
      if (eq < limits.stop_tol) {
        rep.converged = true;
        rep.status = "converged";
        StepDiagnostics last;
        last.m = m;
        last.eps = sched.eps[m];
        last.s = sched.s[m];
        last.K = sched.K[m];
        last.gamma = sched.gamma[m];
        last.qprime_norm = eq / sched.eps[m];
        last.eps_qprime = eq;
        state.history.push_back(last);
        break;
      }
      if (m == limits.max_steps) break;
      level.push_back(eq);
      increases = prev >= 0.0 && eq > prev ? increases + 1 : 0;
      prev = eq;
      if (increases >= 3 && eq > limits.divergence_factor * level[level.size() - 4]) {
        throw DivergenceError("eps_m [q'_m] grew over three consecutive steps");
      }
      const QuadraticSymbol q0_next =
          m + 1 < M ? dec.parts[m + 1] : QuadraticSymbol(n, d, Reality::kRe);
      StepResult sr = kam_step(state, q0_next, sched, ctx);
      state = std::move(sr.next);
      rep.steps = state.m;
    }
  } catch (const SmallDivisorError& e) {
    rep.status = "small_divisor";
    rep.error = e.what();
  } catch (const Error& e) {
    rep.status = "step_failure";
    rep.error = e.what();
  }
  rep.history = state.history;
  for (const auto& w : state.warnings) rep.warnings.push_back(w);
  {
    const std::vector<double> eigs(state.h.eigs.data(), state.h.eigs.data() + d);
    const int m = std::min(state.m, sched.steps() - 1);
    AdmissibilityOptions aopt;
    aopt.v0 = rep.v.front();
    rep.last_admissibility = check_admissible(
        problem.omega, eigs, static_cast<int>(std::min<double>(sched.K[m], limits.kmax_cap)),
        sched.gamma[m], sched.tau, aopt);
  }
  rep.phi = state.phi_tilde;
  rep.e_inf = state.h.e;
  rep.N_inf = state.h.N;
  rep.v_inf.assign(state.h.eigs.data(), state.h.eigs.data() + d);
  try {
    rep.limit = limit_log({state.phi_tilde}, limits.kmax_cap, limits.theta_grid);
  } catch (const Error& e) {
    rep.warnings.push_back(std::string("limit transformation unavailable: ") + e.what());
  }
  rep.bounds = bound_checks(rep);
  return rep;
}

}  // namespace kam

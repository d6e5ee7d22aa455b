#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kamreduce/diophantine.hpp"
#include "kamreduce/flow.hpp"
#include "kamreduce/homology.hpp"
#include "kamreduce/problem.hpp"
#include "kamreduce/smoothing.hpp"

namespace kam {

struct StepDiagnostics {
  int m = 0;
  double eps = 0.0;
  double s = 0.0;
  double K = 0.0;
  int K_eff = 0;
  double gamma = 0.0;
  double qprime_norm = 0.0;   // [q'_m] on strip s_m
  double eps_qprime = 0.0;    // eps_m [q'_m]
  double min_margin = 0.0;
  double f_norm = 0.0;        // [f_m] on strip s^1_{m+1}
  double N_inc_norm = 0.0;
  double e_inc = 0.0;
  double remainder_norm = 0.0;
  double residual = 0.0;      // homological residual
  double map_distance = 0.0;  // ||Phi_m - id|| on the grid
  double symplectic_defect = 0.0;
  double trunc_defect = 0.0;  // dropped tails from products
  int lie_terms = 0;
  double eig_drift = 0.0;
  int warnings = 0;
};

struct StepState {
  int m = 0;
  NormalForm h;
  QuadraticSymbol q;        // q_m
  QuadraticSymbol q_prime;  // q'_m
  ThetaAffineMap phi_tilde; // Phi_0 o ... o Phi_{m-1}
  std::vector<StepDiagnostics> history;
  std::vector<std::string> warnings;
};

struct StepContext {
  std::vector<double> omega;
  std::vector<double> v;  // initial frequencies, sorted ascending
  Limits limits;
};

struct StepResult {
  StepState next;
  ThetaAffineMap phi;  // Phi_m
  HomologySolution solution;
  // eps_{m+1} q_{m+1} and its pieces, kept for identity checks.
  QuadraticSymbol new_perturbation;
};

StepState initial_state(const std::vector<double>& v, const QuadraticSymbol& q0_first);

// One KAM step at level state.m. Throws SmallDivisorError, DivergenceError, or
// Error (eigenvalue drift).
StepResult kam_step(const StepState& state, const QuadraticSymbol& q0_next,
                    const Schedule& sched, const StepContext& ctx);

struct BoundCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct RunReport {
  bool converged = false;
  std::string status;  // converged | max_steps | small_divisor | step_failure
  std::string error;
  int steps = 0;
  double eps0 = 0.0;
  Complex e_inf = 0.0;
  CMat N_inf;
  std::vector<double> v;
  std::vector<double> v_inf;
  std::optional<LimitMap> limit;
  ThetaAffineMap phi;  // composed conjugacy (z, zbar) form
  std::vector<StepDiagnostics> history;
  std::vector<BoundCheck> bounds;
  std::vector<std::string> warnings;
  double decomposition_residual = 0.0;
  std::optional<DiophantineReport> last_admissibility;

  bool bounds_ok() const;
};

RunReport run(const Problem& problem, const ScheduleParams& sp, const Limits& limits);
inline RunReport run(const Config& c) { return run(c.problem, c.schedule, c.limits); }

// Fills the a-priori bound checks from the limit objects.
std::vector<BoundCheck> bound_checks(const RunReport& r);

}  // namespace kam

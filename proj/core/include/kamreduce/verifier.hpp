#pragma once

#include <vector>

#include "kamreduce/kam_driver.hpp"

namespace kam {

struct Trajectory {
  std::vector<double> times;
  std::vector<CVec> states;  // u = (z, zbar)
  std::vector<double> energy;
  // max over t of |u_dt - u_{dt/2}| / 15, the Richardson estimate for RK4
  // applied to the returned (finer) solution.
  double richardson_error = 0.0;
};

// Fixed-step RK4 for u' = S(H(omega t) u + g(omega t)). Runs at dt and dt/2
// and returns the dt/2 solution sampled every dt.
Trajectory integrate_original(const Problem& p, const CVec& z0, double T, double dt);

struct ConjugacyReport {
  double sup_defect = 0.0;
  std::vector<double> times;
  std::vector<double> defect_series;
  double richardson_error = 0.0;
  double energy_drift = 0.0;  // variation of h_inf along the reduced flow
  std::vector<BoundCheck> bound_checks;

  bool bounds_ok() const;
};

// Compares u(t) against Phi(omega t) exp(t S H_inf) Phi(0)^-1 u(0). Throws
// Error when the report did not converge.
ConjugacyReport conjugacy_defect(const RunReport& report, const Problem& p, const CVec& z0,
                                 double T, double dt);

// sum_k ||f(k)||^2 e^{2|k| r} <= 2^n sup_est^2
bool parseval_check(const FourierSeries& f, double r, double sup_est);
double parseval_lhs(const FourierSeries& f, double r);

}  // namespace kam

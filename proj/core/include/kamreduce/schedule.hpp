#pragma once

#include <optional>
#include <string>
#include <vector>

namespace kam {

struct ScheduleParams {
  double eps0 = 1e-3;
  double rho = 0.05;
  double ell = 2.0;
  double beta = 0.5;
  double gamma0 = 1e-3;
  std::optional<double> tau;  // default n - 1 + beta/8
  double eps_star = 0.05;     // configured smallness ceiling, warning only
};

// Step sequences. Index m runs over computed steps:
//   eps[m]   = eps0^((1+rho)^m)
//   s[m]     = eps[m+1]^(1/ell), sigma[m] = 2 s[m]
//   s1[m]    = s^1_{m+1} = (s[m] + 3 s[m+1]) / 4, likewise s2, s3
//   K[m]     = log(1/eps[m]) / (s[m] - s1[m]), gamma[m] = gamma0 / 2^m
struct Schedule {
  ScheduleParams params;
  int n = 1;
  double tau = 0.0;
  std::vector<double> eps, sigma, s, s1, s2, s3, K, gamma;
  std::vector<std::string> warnings;

  int steps() const { return static_cast<int>(K.size()); }
};

inline double default_tau(int n, double beta) { return n - 1 + beta / 8.0; }

// Throws ScheduleError naming the violated inequality.
Schedule make_schedule(const ScheduleParams& p, int n, int max_steps = 64);

// Window checks on their own, returned as messages (empty when valid).
std::vector<std::string> schedule_violations(const ScheduleParams& p, int n);

}  // namespace kam

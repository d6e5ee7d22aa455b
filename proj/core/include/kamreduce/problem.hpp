#pragma once

#include <cstdint>
#include <vector>

#include "kamreduce/quadratic_symbol.hpp"
#include "kamreduce/schedule.hpp"

namespace kam {

// H(omega t, x, xi) = sum_j v_j (x_j^2 + xi_j^2)/2 + epsilon W(omega t, x, xi)
struct Problem {
  int n = 1;
  int d = 1;
  std::vector<double> v;
  std::vector<double> omega;
  double epsilon = 1e-3;
  RealBlocks W;
};

struct Limits {
  int max_steps = 12;
  double stop_tol = 1e-14;
  int kmax_cap = 32;
  int theta_grid = 8;
  double divergence_factor = 10.0;
  double lie_tol = 1e-16;
};

struct VerifyParams {
  std::vector<Complex> z0;
  double T = 100.0;
  double dt = 0.01;
  double tolerance = 1e-4;
};

struct ScanParams {
  std::vector<double> omega_min;
  std::vector<double> omega_max;
  int points_per_axis = 64;
  int K = 10;
  double gamma = 1e-2;
  std::uint64_t mc_samples = 100000;
};

struct Config {
  Problem problem;
  ScheduleParams schedule;
  Limits limits;
  std::uint64_t rng_seed = 1;
  VerifyParams verify;
  ScanParams scan;
};

// Original Hamiltonian h0 + epsilon W as a (z, zbar) symbol.
QuadraticSymbol original_symbol(const Problem& p);

// Throws ConfigError naming the violated constraint.
void validate(const Problem& p);

}  // namespace kam

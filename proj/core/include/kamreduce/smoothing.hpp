#pragma once

#include <vector>

#include "kamreduce/quadratic_symbol.hpp"
#include "kamreduce/schedule.hpp"

namespace kam {

// Flat C-infinity cutoff: 1 on [0, 1/2], 0 on [1, inf), smooth and monotone between.
double bump_multiplier(double t);

// Fourier multiplier phi(sigma |k|_2).
FourierSeries smooth_approx(const FourierSeries& f, double sigma);
QuadraticSymbol smooth_approx(const QuadraticSymbol& q, double sigma);

// Smallest C with ||W(k)|| <= C (1 + |k|)^(-ell-1) over all blocks.
double decay_constant(const RealBlocks& w, double ell);

struct SmoothInput {
  RealBlocks blocks;
  double ell = 2.0;
  double c_ell = 0.0;
};
// Measures the decay constant; throws ConfigError when it exceeds c_max.
SmoothInput certify(const RealBlocks& w, double ell, double c_max);

struct Decomposition {
  // parts[m] has size O(1); eps[m] * parts[m] summed over m reproduces q0
  // up to `residual`.
  std::vector<QuadraticSymbol> parts;
  std::vector<double> sigma;
  std::vector<double> eps;
  QuadraticSymbol residual;
  double residual_norm = 0.0;
};

// parts[m] = (S_{sigma_m} - S_{sigma_{m-1}}) q0 / eps_m with S_{sigma_{-1}} = 0.
Decomposition decompose(const QuadraticSymbol& q0, const Schedule& sched, int M);

}  // namespace kam

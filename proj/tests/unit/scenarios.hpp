#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "kamreduce/problem.hpp"

namespace kamtest {

// d = n = 1, v = 1, golden-mean omega, W = x^2 cos(theta) + xi sin(theta).
inline kam::Config desk_config(double eps = 1e-3) {
  kam::Config c;
  kam::Problem& p = c.problem;
  p.n = 1;
  p.d = 1;
  p.v = {1.0};
  p.omega = {std::numbers::phi};
  p.epsilon = eps;
  p.W = kam::RealBlocks(1, 1);
  p.W.xx.add(kam::MultiIndex{1}, kam::CMat::Constant(1, 1, 0.5));
  p.W.xx.add(kam::MultiIndex{-1}, kam::CMat::Constant(1, 1, 0.5));
  p.W.xi.add(kam::MultiIndex{1}, kam::CMat::Constant(1, 1, kam::Complex(0.0, -0.5)));
  p.W.xi.add(kam::MultiIndex{-1}, kam::CMat::Constant(1, 1, kam::Complex(0.0, 0.5)));
  c.schedule.eps0 = eps;
  c.schedule.rho = 0.05;
  c.schedule.ell = 2.0;
  c.schedule.beta = 0.5;
  c.schedule.gamma0 = 1e-3;
  c.verify.z0 = {kam::Complex(1.0, 0.0)};
  return c;
}

// theta-constant W = <x, D x> + <xi, D xi>: frequencies shift to v_j + 2 eps D_j.
inline kam::Config diagonal_config(const std::vector<double>& v, const std::vector<double>& D,
                                   double eps = 1e-3) {
  kam::Config c = desk_config(eps);
  const int d = static_cast<int>(v.size());
  kam::Problem& p = c.problem;
  p.d = d;
  p.v = v;
  p.W = kam::RealBlocks(1, d);
  kam::CMat Dm = kam::CMat::Zero(d, d);
  for (int j = 0; j < d; ++j) Dm(j, j) = D[j];
  p.W.xx.add(kam::MultiIndex{0}, Dm);
  p.W.xixi.add(kam::MultiIndex{0}, Dm);
  c.verify.z0.assign(d, kam::Complex(1.0, 0.0));
  return c;
}

inline kam::Config zero_forcing_config(const std::vector<double>& v) {
  kam::Config c = diagonal_config(v, std::vector<double>(v.size(), 0.0));
  c.problem.W = kam::RealBlocks(1, static_cast<int>(v.size()));
  return c;
}

}  // namespace kamtest

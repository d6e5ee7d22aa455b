#pragma once

#include <string>
#include <vector>

#include "kamreduce/diophantine.hpp"
#include "kamreduce/quadratic_symbol.hpp"

namespace kam {

// h = <z, N zbar> + e with N Hermitian; eigs ascending with eigenvectors U.
struct NormalForm {
  Complex e = 0.0;
  CMat N;
  RVec eigs;
  CMat U;

  NormalForm() = default;
  NormalForm(const CMat& N, Complex e = 0.0);
  static NormalForm diagonal(const std::vector<double>& v);
  int d() const { return static_cast<int>(N.rows()); }
};

enum class SylvesterSide { kZZbar, kZZ, kZbZb };

struct DivisorPolicy {
  double gamma = 0.0;
  double tau = 1.0;
  // Divisors below warn_factor * threshold are reported through `warnings`.
  double warn_factor = 10.0;
  std::vector<std::string>* warnings = nullptr;
};

// Solves, with lambda = <k, omega>,
//   zzbar: (lambda - N) F + F N      = -i rhs
//   zz:    (lambda - N) F - F N^T    = -i rhs
//   zbzb:  (lambda + N^T) F + F N    = -i rhs
// in the eigenbasis of N. Throws SmallDivisorError when a divisor falls below
// gamma / (1 + |k|^tau).
CMat solve_sylvester(const MultiIndex& k, const std::vector<double>& omega,
                     const NormalForm& h, const CMat& rhs, SylvesterSide side,
                     const DivisorPolicy& policy = {});

// Derivative of the zzbar solution along omega_l given dN = d_l N and
// drhs = d_l rhs. Solves the same operator with right side
// -i drhs - k_l F + [dN, F] (so that op(dF) equals it).
CMat derivative_sylvester(const MultiIndex& k, const std::vector<double>& omega,
                          const NormalForm& h, const CMat& dN, const CMat& F,
                          const CMat& drhs, int l, const DivisorPolicy& policy = {});

struct HomologyOptions {
  int Kmax = 64;        // truncation of products in the residual check
  double strip = 0.0;   // strip on which residual_norm is measured
  bool check_residual = true;
};

struct HomologySolution {
  QuadraticSymbol f;          // generator
  Complex e_inc = 0.0;        // eps * Qtheta(0)
  CMat N_inc;                 // eps * Qzzbar(0)
  QuadraticSymbol remainder;  // eps * (1 - Gamma_K) q
  double residual_norm = 0.0;
  double min_divisor_margin = 0.0;
  std::vector<std::string> warnings;
};

// Solves eps {h, f} + eps q - eps omega.d_theta f = <z, Ntilde zbar> + etilde + r
// with f mean free in the zzbar and theta blocks and r = eps (1 - Gamma_K) q.
HomologySolution solve_homological(const NormalForm& h, const QuadraticSymbol& q,
                                   const std::vector<double>& omega, int K, double gamma,
                                   double tau, double eps, const HomologyOptions& opt = {});

// Left side minus right side of the homological identity, as a symbol.
QuadraticSymbol homological_defect(const NormalForm& h, const QuadraticSymbol& q,
                                   const HomologySolution& sol,
                                   const std::vector<double>& omega, double eps, int Kmax);

}  // namespace kam

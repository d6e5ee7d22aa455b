#pragma once

#include <vector>

#include "kamreduce/quadratic_symbol.hpp"

namespace kam {

enum class MapRep { kComplexZZbar, kRealXXi };

// u -> M(theta) u + c(theta), u = (z, zbar) or (x, xi) depending on rep.
struct ThetaAffineMap {
  int n = 1;
  int d = 1;
  FourierSeries linear;  // 2d x 2d
  FourierSeries shift;   // 2d
  MapRep rep = MapRep::kComplexZZbar;

  static ThetaAffineMap identity(int n, int d, MapRep rep = MapRep::kComplexZZbar);
  CMat linear_at(const std::vector<double>& th) const;
  CVec shift_at(const std::vector<double>& th) const;
  CVec apply(const std::vector<double>& th, const CVec& u) const;
  // Solves M(theta) w = u - c(theta).
  CVec apply_inverse(const std::vector<double>& th, const CVec& u) const;
};

// u = T (x, xi) with z = (xi - i x)/sqrt 2, zbar = (xi + i x)/sqrt 2.
CMat complex_from_real(int d);
// J = [[0, I], [-I, 0]]
Eigen::MatrixXd standard_J(int d);

// Converts a complex (z, zbar) map to real (x, xi) form: M_r = T^-1 M T, c_r = T^-1 c.
ThetaAffineMap to_real(const ThetaAffineMap& m);

// max over the grid of ||M^T J M - J||_1 in real representation.
double symplectic_defect(const ThetaAffineMap& m, int grid_points = 0);
// max over the grid of max(||M - I||_1, |c|) in real representation.
double distance_from_identity(const ThetaAffineMap& m, int grid_points = 0);

struct HamiltonianMatrixPair {
  FourierSeries A;  // eps S H_f, 2d x 2d
  FourierSeries b;  // eps S g_f, 2d
};
// Requires the z/zbar block relations (ClassViolation otherwise).
HamiltonianMatrixPair generator_blocks(const QuadraticSymbol& f, double eps);

struct FlowOptions {
  int Kmax = 64;
  int min_grid = 8;
  double alias_tol = 1e-12;
  double symplectic_tol = 1e-10;
};
// Time-one map of the frozen-theta fiber flow of eps f: M = exp(A), c = phi1(A) b.
ThetaAffineMap time_one_map(const QuadraticSymbol& f, double eps, const FlowOptions& opt = {});

struct MapProduct {
  ThetaAffineMap value;
  double dropped_norm = 0.0;
};
// result(u) = outer(inner(u))
MapProduct compose(const ThetaAffineMap& outer, const ThetaAffineMap& inner, int Kmax);

// q(theta, M u + c) as a symbol in u.
BracketResult pullback(const QuadraticSymbol& q, const ThetaAffineMap& phi, int Kmax);

enum class LieWeight { kOne, kOneMinusKappa };

struct LieResult {
  QuadraticSymbol value;
  int terms = 0;
  double dropped_norm = 0.0;
};
// int_0^1 w(kappa) g o X^kappa_{eps f} dkappa = sum_j eps^j c_j ad^j g / j!,
// ad g = {g, f}, c_j = int_0^1 w(kappa) kappa^j dkappa. Stops once a term's
// norm is below tol times the running sum; throws DivergenceError after
// max_terms terms.
LieResult lie_transform(const QuadraticSymbol& g, const QuadraticSymbol& f, double eps,
                        LieWeight w, double tol, int Kmax, int max_terms = 60);

struct LimitMap {
  ThetaAffineMap composed;  // complex representation
  FourierSeries A;          // log of the real linear part, 2d x 2d
  FourierSeries V;          // real shift, 2d
  double hamiltonian_defect = 0.0;  // max over grid of ||JA - (JA)^T||_1
  double reconstruction_error = 0.0;  // max over grid of ||exp(A) - M_r||_1
  double dropped_norm = 0.0;
};
// Composes maps in order (maps[0] outermost) and takes the principal log of the
// real linear part pointwise. Throws Error when ||M_r - I||_1 >= 0.5 somewhere.
LimitMap limit_log(const std::vector<ThetaAffineMap>& maps, int Kmax, int min_grid = 8);

}  // namespace kam

#pragma once

#include "kamreduce/fourier_series.hpp"

namespace kam {

enum class Reality { kRe, kIm, kNone };
const char* to_string(Reality r);
Reality reality_from_string(const std::string& s);

// q = <z,Qzz z> + <z,Qzzbar zbar> + <zbar,Qzbzb zbar> + <Qz,z> + <Qzbar,zbar> + Qtheta,
// with bilinear (unconjugated) pairings and theta-dependent coefficients.
struct QuadraticSymbol {
  int n = 1;
  int d = 1;
  FourierSeries zz, zzbar, zbzb;  // d x d
  FourierSeries z, zbar;          // d
  FourierSeries theta;            // scalar
  Reality reality = Reality::kRe;

  QuadraticSymbol() = default;
  QuadraticSymbol(int n, int d, Reality r = Reality::kRe);

  bool is_zero() const;
  void prune();

  QuadraticSymbol operator+(const QuadraticSymbol& o) const;
  QuadraticSymbol operator-(const QuadraticSymbol& o) const;
  QuadraticSymbol operator*(Complex s) const;
  QuadraticSymbol& operator+=(const QuadraticSymbol& o);

  // Largest |k| over all blocks, -1 when zero.
  int radius() const;
  int axis_radius() const;

  // Value at (theta, z, zbar) with z and zbar treated as independent.
  Complex evaluate(const std::vector<double>& th, const CVec& zv, const CVec& zb) const;
};

// [q]_s: sum of block strip norms.
double strip_norm(const QuadraticSymbol& q, double s);
double distance(const QuadraticSymbol& a, const QuadraticSymbol& b);

// Block relations of the Re class: Qzzbar(k) = Qzzbar(-k)^*, Qzbzb(k) = conj Qzz(-k),
// Qzbar(k) = conj Qz(-k), and Qtheta(k) = conj Qtheta(-k) (Re) or
// -conj Qtheta(-k) (Im). Symmetric parts of zz/zbzb are compared.
bool block_relations_hold(const QuadraticSymbol& q, double tol = 1e-12);
bool satisfies_class(const QuadraticSymbol& q, Reality r, double tol = 1e-12);

// Packed form q = 1/2 <u,H u> + <g,u> + c with u = (z, zbar).
struct PackedSymbol {
  FourierSeries H;  // 2d x 2d, symmetric coefficients
  FourierSeries g;  // 2d
  FourierSeries c;  // scalar
};
PackedSymbol pack(const QuadraticSymbol& q);
QuadraticSymbol unpack(const PackedSymbol& p, int n, int d, Reality r);

// S = [[0, -iI], [iI, 0]], so that u' = S grad f is the Hamiltonian field.
CMat symplectic_S(int d);

struct BracketResult {
  QuadraticSymbol value;
  double dropped_norm = 0.0;
};
// {f, g} = -i f_z . g_zbar + i f_zbar . g_z
BracketResult poisson_bracket(const QuadraticSymbol& f, const QuadraticSymbol& g, int Kmax);

// Real-variable blocks of W(theta, x, xi) = <x,Wxx x> + <x,Wxxi xi> + <xi,Wxixi xi>
// + <Wx,x> + <Wxi,xi> + Wtheta.
struct RealBlocks {
  int n = 1;
  int d = 1;
  FourierSeries xx, xxi, xixi;  // d x d
  FourierSeries x, xi;          // d
  FourierSeries theta;          // scalar

  RealBlocks() = default;
  RealBlocks(int n, int d);
  double evaluate(const std::vector<double>& th, const RVec& x, const RVec& xi) const;
};

// Change of variables z = (xi - i x)/sqrt 2. Throws ClassViolation on
// blocks that are not real-valued on real theta.
QuadraticSymbol from_real_blocks(const RealBlocks& w);
// Inverse of from_real_blocks; exact for symmetric xx and xixi blocks.
RealBlocks to_real_blocks(const QuadraticSymbol& q);
// True when every coefficient block satisfies f(-k) = conj f(k).
bool is_real_valued(const FourierSeries& f, double tol = 1e-12);

// h = <z, N zbar> + e as a theta-constant symbol.
QuadraticSymbol normal_form_symbol(int n, const CMat& N, Complex e);

}  // namespace kam

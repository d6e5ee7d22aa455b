#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "kamreduce/flow.hpp"
#include "kamreduce/fourier_series.hpp"
#include "kamreduce/multi_index.hpp"
#include "kamreduce/quadratic_symbol.hpp"

namespace kamtest {

using kam::CMat;
using kam::Complex;
using kam::CoeffKind;
using kam::CVec;
using kam::FourierSeries;
using kam::MultiIndex;
using kam::QuadraticSymbol;
using kam::RealBlocks;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Rand {
 public:
  explicit Rand(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  Complex complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }
  CMat cmat(int r, int c, double scale = 1.0) {
    CMat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = complex(scale);
    return m;
  }
  CMat rmat(int r, int c, double scale = 1.0) {
    CMat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = uniform(-scale, scale);
    return m;
  }
  CMat hermitian(int d, double scale = 1.0) {
    const CMat a = cmat(d, d, scale);
    return 0.5 * (a + a.adjoint());
  }
  MultiIndex index(int n, int K) {
    MultiIndex k(n);
    int budget = integer(0, K);
    for (int j = 0; j < n && budget > 0; ++j) {
      const int a = integer(0, budget);
      k[j] = integer(0, 1) ? a : -a;
      budget -= a;
    }
    return k;
  }
  std::vector<double> theta(int n) {
    std::vector<double> t(n);
    for (auto& x : t) x = uniform(0.0, kTwoPi);
    return t;
  }
  CVec cvec(int d, double scale = 1.0) { return cmat(d, 1, scale); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline FourierSeries random_series(Rand& r, int n, CoeffKind kind, int rows, int cols, int K,
                                   int terms, double decay = 0.0) {
  FourierSeries f(n, kind, rows, cols);
  for (int t = 0; t < terms; ++t) {
    const MultiIndex k = r.index(n, K);
    f.add(k, r.cmat(rows, cols) * std::exp(-decay * k.order()));
  }
  return f;
}

// Real valued on real theta: coefficient at -k is the conjugate of the one at k.
inline FourierSeries random_real_series(Rand& r, int n, CoeffKind kind, int rows, int cols, int K,
                                        int terms, bool symmetric = false, double decay = 0.0) {
  FourierSeries f(n, kind, rows, cols);
  for (int t = 0; t < terms; ++t) {
    const MultiIndex k = r.index(n, K);
    CMat c = r.cmat(rows, cols) * std::exp(-decay * k.order());
    if (symmetric) c = 0.5 * (c + c.transpose()).eval();
    if (k.is_zero()) {
      f.add(k, CMat(c.real().cast<Complex>()));
    } else {
      f.add(k, c);
      f.add(-k, CMat(c.conjugate()));
    }
  }
  return f;
}

inline RealBlocks random_real_blocks(Rand& r, int n, int d, int K, int terms, double decay = 0.0) {
  RealBlocks w(n, d);
  w.xx = random_real_series(r, n, CoeffKind::kMatrix, d, d, K, terms, true, decay);
  w.xxi = random_real_series(r, n, CoeffKind::kMatrix, d, d, K, terms, false, decay);
  w.xixi = random_real_series(r, n, CoeffKind::kMatrix, d, d, K, terms, true, decay);
  w.x = random_real_series(r, n, CoeffKind::kVector, d, 1, K, terms, false, decay);
  w.xi = random_real_series(r, n, CoeffKind::kVector, d, 1, K, terms, false, decay);
  w.theta = random_real_series(r, n, CoeffKind::kScalar, 1, 1, K, terms, false, decay);
  return w;
}

inline QuadraticSymbol random_re_symbol(Rand& r, int n, int d, int K, int terms,
                                        double decay = 0.0) {
  return kam::from_real_blocks(random_real_blocks(r, n, d, K, terms, decay));
}

// Arbitrary symbol without reality structure, for bracket algebra tests.
inline QuadraticSymbol random_symbol(Rand& r, int n, int d, int K, int terms) {
  QuadraticSymbol q(n, d, kam::Reality::kNone);
  q.zz = random_series(r, n, CoeffKind::kMatrix, d, d, K, terms);
  q.zzbar = random_series(r, n, CoeffKind::kMatrix, d, d, K, terms);
  q.zbzb = random_series(r, n, CoeffKind::kMatrix, d, d, K, terms);
  q.z = random_series(r, n, CoeffKind::kVector, d, 1, K, terms);
  q.zbar = random_series(r, n, CoeffKind::kVector, d, 1, K, terms);
  q.theta = random_series(r, n, CoeffKind::kScalar, 1, 1, K, terms);
  return q;
}

inline QuadraticSymbol constant_symbol(const QuadraticSymbol& q) {
  QuadraticSymbol c(q.n, q.d, q.reality);
  const MultiIndex zero(q.n);
  auto keep = [&](const FourierSeries& f, FourierSeries& out) {
    if (f.contains(zero)) out.set(zero, f.at(zero));
  };
  keep(q.zz, c.zz);
  keep(q.zzbar, c.zzbar);
  keep(q.zbzb, c.zbzb);
  keep(q.z, c.z);
  keep(q.zbar, c.zbar);
  keep(q.theta, c.theta);
  return c;
}

// Independent pointwise evaluation of a series: sum_k f(k) e^{i<k,theta>}.
inline CMat eval_series(const FourierSeries& f, const std::vector<double>& th) {
  CMat out = CMat::Zero(f.rows(), f.cols());
  for (const auto& [k, c] : f.coeffs()) {
    double phase = 0.0;
    for (int j = 0; j < f.dim(); ++j) phase += k[j] * th[j];
    out += c * std::polar(1.0, phase);
  }
  return out;
}

// Independent evaluation of a quadratic symbol with z, zbar independent.
inline Complex eval_symbol(const QuadraticSymbol& q, const std::vector<double>& th, const CVec& z,
                           const CVec& zb) {
  Complex v = (z.transpose() * eval_series(q.zz, th) * z)(0, 0);
  v += (z.transpose() * eval_series(q.zzbar, th) * zb)(0, 0);
  v += (zb.transpose() * eval_series(q.zbzb, th) * zb)(0, 0);
  v += (eval_series(q.z, th).transpose() * z)(0, 0);
  v += (eval_series(q.zbar, th).transpose() * zb)(0, 0);
  v += eval_series(q.theta, th)(0, 0);
  return v;
}

// Symplecticity bound every produced map must meet.
inline constexpr double kSymplecticTol = 1e-10;

}  // namespace kamtest

#define EXPECT_SYMPLECTIC(map) EXPECT_LE(kam::symplectic_defect(map), kamtest::kSymplecticTol)

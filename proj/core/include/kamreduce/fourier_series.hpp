#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <map>

#include "kamreduce/multi_index.hpp"

namespace kam {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Coefficient ring tag. Scalars are 1x1, vectors are r x 1.
enum class CoeffKind { kScalar, kVector, kMatrix };

// Relative magnitude below which coefficients are dropped after arithmetic.
inline constexpr double kDropThreshold = 1e-16;

// Norm used for one coefficient: |.| for scalars, Euclidean for vectors,
// induced 1-norm (max column sum) for matrices.
double coeff_norm(const CMat& c, CoeffKind kind);

// Finitely supported Fourier series on T^n with coefficients in a matrix ring.
class FourierSeries {
 public:
  using Map = std::map<MultiIndex, CMat>;

  FourierSeries() = default;
  FourierSeries(int n, CoeffKind kind, int rows, int cols = 1);

  static FourierSeries scalar(int n) { return {n, CoeffKind::kScalar, 1, 1}; }
  static FourierSeries vector(int n, int d) { return {n, CoeffKind::kVector, d, 1}; }
  static FourierSeries matrix(int n, int r, int c) {
    return {n, CoeffKind::kMatrix, r, c};
  }
  static FourierSeries constant(int n, CoeffKind kind, const CMat& c);

  int dim() const { return n_; }
  CoeffKind kind() const { return kind_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }
  const Map& coeffs() const { return coeffs_; }

  // Zero coefficient of the right shape when k is absent.
  CMat at(const MultiIndex& k) const;
  Complex scalar_at(const MultiIndex& k) const;
  bool contains(const MultiIndex& k) const { return coeffs_.count(k) != 0; }

  // Adds c to the coefficient at k.
  void add(const MultiIndex& k, const CMat& c);
  void add(const MultiIndex& k, Complex c);
  void set(const MultiIndex& k, const CMat& c);
  void erase(const MultiIndex& k) { coeffs_.erase(k); }

  // Largest |k| in the support, -1 if empty.
  int radius() const;
  // Largest |k_j| in the support over all axes, -1 if empty.
  int axis_radius() const;
  double max_coeff_norm() const;

  // Removes coefficients at or below kDropThreshold relative to the largest.
  void prune(double rel = kDropThreshold);

  FourierSeries& operator+=(const FourierSeries& o);
  FourierSeries& operator-=(const FourierSeries& o);
  FourierSeries& operator*=(Complex s);
  FourierSeries operator+(const FourierSeries& o) const;
  FourierSeries operator-(const FourierSeries& o) const;
  FourierSeries operator*(Complex s) const;
  FourierSeries operator-() const;

  // Coefficientwise maps.
  FourierSeries transpose() const;
  // g(theta) = f(theta)^* pointwise: coefficient at k becomes f(-k)^*.
  FourierSeries pointwise_adjoint() const;
  // g(theta) = conj(f(theta)) pointwise: coefficient at k becomes conj f(-k).
  FourierSeries pointwise_conj() const;
  FourierSeries map(const std::function<CMat(const MultiIndex&, const CMat&)>& fn,
                    CoeffKind kind, int rows, int cols) const;
  // Left/right multiplication by a constant matrix.
  FourierSeries left_mul(const CMat& a, CoeffKind kind) const;
  FourierSeries right_mul(const CMat& a) const;
  // Extracts rows/cols block as a new series.
  FourierSeries block(int r0, int c0, int nr, int nc, CoeffKind kind) const;

  // Pointwise value at a real or complex angle vector.
  CMat evaluate(const std::vector<double>& theta) const;

  // Coefficientwise comparison, max over k of coefficient norm of the difference.
  double distance(const FourierSeries& o) const;

 private:
  void check_compatible(const FourierSeries& o, const char* op) const;

  int n_ = 1;
  CoeffKind kind_ = CoeffKind::kScalar;
  int rows_ = 1;
  int cols_ = 1;
  Map coeffs_;
};

// sum_k ||f(k)|| e^{|k| s}
double strip_norm(const FourierSeries& f, double s);

struct Truncation {
  FourierSeries low;
  FourierSeries tail;
};
// Gamma_K: low keeps |k| <= K (k = 0 included), tail the rest.
Truncation truncate(const FourierSeries& f, int K);

struct Product {
  FourierSeries value;
  // Weighted (s = 0) norm of dropped coefficients with |k| > Kmax.
  double dropped_norm = 0.0;
};
// Cauchy product. Shapes: scalar x any, matrix x matrix, matrix x vector.
Product multiply(const FourierSeries& a, const FourierSeries& b, int Kmax);
// Bilinear (no conjugation) inner product of two vector series: sum_i a_i b_i.
Product inner(const FourierSeries& a, const FourierSeries& b, int Kmax);

// d/dtheta_j, multiplies coefficients by i k_j. Axis j is zero based.
FourierSeries partial_theta(const FourierSeries& f, int j);
// omega . d_theta f
FourierSeries omega_derivative(const FourierSeries& f, const std::vector<double>& omega);

}  // namespace kam

#include "kamreduce/fourier_series.hpp"

#include <cmath>
#include <limits>

#include "kamreduce/error.hpp"
#include "kamreduce/theta_grid.hpp"

namespace kam {

double coeff_norm(const CMat& c, CoeffKind kind) {
  switch (kind) {
    case CoeffKind::kScalar:
      return std::abs(c(0, 0));
    case CoeffKind::kVector:
      return c.norm();
    case CoeffKind::kMatrix:
      return c.cwiseAbs().colwise().sum().maxCoeff();
  }
  return 0.0;
}

FourierSeries::FourierSeries(int n, CoeffKind kind, int rows, int cols)
    : n_(n), kind_(kind), rows_(rows), cols_(cols) {
  if (n < 1 || n > kMaxTorusDim) throw ShapeMismatch("bad torus dimension");
  if (kind == CoeffKind::kScalar && (rows != 1 || cols != 1)) {
    throw ShapeMismatch("scalar series must be 1x1");
  }
  if (kind == CoeffKind::kVector && cols != 1) {
    throw ShapeMismatch("vector series must have one column");
  }
}

FourierSeries FourierSeries::constant(int n, CoeffKind kind, const CMat& c) {
  FourierSeries f(n, kind, static_cast<int>(c.rows()), static_cast<int>(c.cols()));
  f.add(MultiIndex(n), c);
  return f;
}

CMat FourierSeries::at(const MultiIndex& k) const {
  auto it = coeffs_.find(k);
  if (it == coeffs_.end()) return CMat::Zero(rows_, cols_);
  return it->second;
}

Complex FourierSeries::scalar_at(const MultiIndex& k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? Complex(0.0) : it->second(0, 0);
}

void FourierSeries::add(const MultiIndex& k, const CMat& c) {
  if (c.rows() != rows_ || c.cols() != cols_) {
    throw ShapeMismatch("coefficient shape does not match series");
  }
  if (k.dim() != n_) throw ShapeMismatch("multi-index dimension mismatch");
  auto [it, inserted] = coeffs_.try_emplace(k, c);
  if (!inserted) it->second += c;
}

void FourierSeries::add(const MultiIndex& k, Complex c) {
  CMat m(1, 1);
  m(0, 0) = c;
  add(k, m);
}

void FourierSeries::set(const MultiIndex& k, const CMat& c) {
  if (c.rows() != rows_ || c.cols() != cols_) {
    throw ShapeMismatch("coefficient shape does not match series");
  }
  coeffs_[k] = c;
}

int FourierSeries::radius() const {
  int r = -1;
  for (const auto& [k, c] : coeffs_) r = std::max(r, k.order());
  return r;
}

int FourierSeries::axis_radius() const {
  int r = -1;
  for (const auto& [k, c] : coeffs_) r = std::max(r, k.max_abs());
  return r;
}

double FourierSeries::max_coeff_norm() const {
  double m = 0.0;
  for (const auto& [k, c] : coeffs_) m = std::max(m, coeff_norm(c, kind_));
  return m;
}

void FourierSeries::prune(double rel) {
  const double cut = rel * max_coeff_norm();
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (coeff_norm(it->second, kind_) <= cut) {
      it = coeffs_.erase(it);
    } else {
      ++it;
    }
  }
}

void FourierSeries::check_compatible(const FourierSeries& o, const char* op) const {
  if (n_ != o.n_ || rows_ != o.rows_ || cols_ != o.cols_ || kind_ != o.kind_) {
    throw ShapeMismatch(std::string("incompatible series in ") + op);
  }
}

FourierSeries& FourierSeries::operator+=(const FourierSeries& o) {
  check_compatible(o, "+");
  for (const auto& [k, c] : o.coeffs_) add(k, c);
  prune();
  return *this;
}

FourierSeries& FourierSeries::operator-=(const FourierSeries& o) {
  check_compatible(o, "-");
  for (const auto& [k, c] : o.coeffs_) add(k, CMat(-c));
  prune();
  return *this;
}

FourierSeries& FourierSeries::operator*=(Complex s) {
  if (s == Complex(0.0)) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [k, c] : coeffs_) c *= s;
  return *this;
}

FourierSeries FourierSeries::operator+(const FourierSeries& o) const {
  FourierSeries r = *this;
  r += o;
  return r;
}

FourierSeries FourierSeries::operator-(const FourierSeries& o) const {
  FourierSeries r = *this;
  r -= o;
  return r;
}

FourierSeries FourierSeries::operator*(Complex s) const {
  FourierSeries r = *this;
  r *= s;
  return r;
}

FourierSeries FourierSeries::operator-() const { return *this * Complex(-1.0); }

FourierSeries FourierSeries::transpose() const {
  CoeffKind kind = kind_ == CoeffKind::kScalar ? kind_ : CoeffKind::kMatrix;
  FourierSeries r(n_, kind, cols_, rows_);
  for (const auto& [k, c] : coeffs_) r.coeffs_.emplace(k, c.transpose());
  return r;
}

FourierSeries FourierSeries::pointwise_adjoint() const {
  CoeffKind kind = kind_ == CoeffKind::kScalar ? kind_ : CoeffKind::kMatrix;
  FourierSeries r(n_, kind, cols_, rows_);
  for (const auto& [k, c] : coeffs_) r.coeffs_.emplace(-k, c.adjoint());
  return r;
}

FourierSeries FourierSeries::pointwise_conj() const {
  FourierSeries r(n_, kind_, rows_, cols_);
  for (const auto& [k, c] : coeffs_) r.coeffs_.emplace(-k, c.conjugate());
  return r;
}

FourierSeries FourierSeries::map(
    const std::function<CMat(const MultiIndex&, const CMat&)>& fn, CoeffKind kind,
    int rows, int cols) const {
  FourierSeries r(n_, kind, rows, cols);
  for (const auto& [k, c] : coeffs_) r.add(k, fn(k, c));
  r.prune();
  return r;
}

FourierSeries FourierSeries::left_mul(const CMat& a, CoeffKind kind) const {
  if (a.cols() != rows_) throw ShapeMismatch("left_mul shape mismatch");
  return map([&](const MultiIndex&, const CMat& c) { return CMat(a * c); }, kind,
             static_cast<int>(a.rows()), cols_);
}

FourierSeries FourierSeries::right_mul(const CMat& a) const {
  if (a.rows() != cols_) throw ShapeMismatch("right_mul shape mismatch");
  return map([&](const MultiIndex&, const CMat& c) { return CMat(c * a); },
             CoeffKind::kMatrix, rows_, static_cast<int>(a.cols()));
}

FourierSeries FourierSeries::block(int r0, int c0, int nr, int nc,
                                   CoeffKind kind) const {
  FourierSeries r(n_, kind, nr, nc);
  for (const auto& [k, c] : coeffs_) r.coeffs_.emplace(k, c.block(r0, c0, nr, nc));
  r.prune();
  return r;
}

CMat FourierSeries::evaluate(const std::vector<double>& theta) const {
  CMat v = CMat::Zero(rows_, cols_);
  for (const auto& [k, c] : coeffs_) {
    v += c * std::polar(1.0, k.dot(theta));
  }
  return v;
}

double FourierSeries::distance(const FourierSeries& o) const {
  check_compatible(o, "distance");
  double d = 0.0;
  for (const auto& [k, c] : coeffs_) {
    d = std::max(d, coeff_norm(CMat(c - o.at(k)), kind_));
  }
  for (const auto& [k, c] : o.coeffs_) {
    if (!contains(k)) d = std::max(d, coeff_norm(c, kind_));
  }
  return d;
}

double strip_norm(const FourierSeries& f, double s) {
  double sum = 0.0;
  for (const auto& [k, c] : f.coeffs()) {
    sum += coeff_norm(c, f.kind()) * std::exp(k.order() * s);
  }
  return sum;
}

Truncation truncate(const FourierSeries& f, int K) {
  Truncation t{FourierSeries(f.dim(), f.kind(), f.rows(), f.cols()),
               FourierSeries(f.dim(), f.kind(), f.rows(), f.cols())};
  for (const auto& [k, c] : f.coeffs()) {
    (k.order() <= K ? t.low : t.tail).set(k, c);
  }
  return t;
}

namespace {

struct ProductShape {
  CoeffKind kind;
  int rows;
  int cols;
};

ProductShape product_shape(const FourierSeries& a, const FourierSeries& b) {
  if (a.dim() != b.dim()) throw ShapeMismatch("multiply: torus dimension mismatch");
  if (a.kind() == CoeffKind::kScalar) return {b.kind(), b.rows(), b.cols()};
  if (b.kind() == CoeffKind::kScalar) return {a.kind(), a.rows(), a.cols()};
  if (a.kind() == CoeffKind::kMatrix && a.cols() == b.rows()) {
    return {b.kind(), a.rows(), b.cols()};
  }
  throw ShapeMismatch("multiply: incompatible coefficient shapes");
}

}  // namespace

namespace {

// Above this many coefficient pairs the product goes through an FFT grid.
constexpr std::size_t kSpectralPairs = std::size_t{1} << 14;
constexpr std::size_t kSpectralMaxPoints = std::size_t{1} << 22;

CMat coeff_product(const CMat& x, const CMat& y, bool x_scalar, bool y_scalar) {
  return x_scalar ? CMat(x(0, 0) * y) : y_scalar ? CMat(x * y(0, 0)) : CMat(x * y);
}

// Zero-padded grid with G > 2 (ra + rb) per axis, so the pointwise product is
// alias free and the result equals the convolution up to FFT rounding.
bool spectral_multiply(const FourierSeries& a, const FourierSeries& b, int Kmax,
                       const ProductShape& shape, Product& p, FourierSeries& dropped) {
  const int R = a.axis_radius() + b.axis_radius();
  int G = 2;
  while (G < 2 * R + 1) G *= 2;
  double points = 1.0;
  for (int j = 0; j < a.dim(); ++j) points *= G;
  if (G > kMaxGridPerAxis || points > static_cast<double>(kSpectralMaxPoints)) return false;
  const ThetaGrid grid(a.dim(), G);
  const auto va = grid.synthesize(a);
  const auto vb = grid.synthesize(b);
  const bool a_scalar = a.kind() == CoeffKind::kScalar;
  const bool b_scalar = b.kind() == CoeffKind::kScalar;
  std::vector<CMat> prod(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) prod[i] = coeff_product(va[i], vb[i], a_scalar, b_scalar);
  const FourierSeries full = grid.analyze(prod, shape.kind, std::numeric_limits<int>::max());
  // Coefficients under the FFT rounding floor carry no information.
  const double floor =
      8.0 * std::numeric_limits<double>::epsilon() * strip_norm(a, 0.0) * strip_norm(b, 0.0);
  for (const auto& [k, c] : full.coeffs()) {
    if (coeff_norm(c, shape.kind) <= floor) continue;
    (k.order() <= Kmax ? p.value : dropped).add(k, c);
  }
  return true;
}

}  // namespace

Product multiply(const FourierSeries& a, const FourierSeries& b, int Kmax) {
  const ProductShape shape = product_shape(a, b);
  Product p{FourierSeries(a.dim(), shape.kind, shape.rows, shape.cols), 0.0};
  FourierSeries dropped(a.dim(), shape.kind, shape.rows, shape.cols);
  const bool a_scalar = a.kind() == CoeffKind::kScalar;
  const bool b_scalar = b.kind() == CoeffKind::kScalar;
  if (a.size() * b.size() <= kSpectralPairs || !spectral_multiply(a, b, Kmax, shape, p, dropped)) {
    for (const auto& [ka, ca] : a.coeffs()) {
      for (const auto& [kb, cb] : b.coeffs()) {
        const MultiIndex k = ka + kb;
        (k.order() <= Kmax ? p.value : dropped).add(k, coeff_product(ca, cb, a_scalar, b_scalar));
      }
    }
  }
  p.value.prune();
  p.dropped_norm = strip_norm(dropped, 0.0);
  return p;
}

Product inner(const FourierSeries& a, const FourierSeries& b, int Kmax) {
  if (a.kind() != CoeffKind::kVector || b.kind() != CoeffKind::kVector ||
      a.rows() != b.rows()) {
    throw ShapeMismatch("inner: expects two vector series of equal length");
  }
  // Row vector times column vector yields a 1x1 vector series; relabel it.
  Product q = multiply(a.transpose(), b, Kmax);
  FourierSeries s = FourierSeries::scalar(a.dim());
  for (const auto& [k, c] : q.value.coeffs()) s.set(k, c);
  q.value = std::move(s);
  return q;
}

FourierSeries partial_theta(const FourierSeries& f, int j) {
  if (j < 0 || j >= f.dim()) throw ShapeMismatch("partial_theta: axis out of range");
  return f.map([j](const MultiIndex& k, const CMat& c) {
    return CMat(c * Complex(0.0, k[j]));
  }, f.kind(), f.rows(), f.cols());
}

FourierSeries omega_derivative(const FourierSeries& f, const std::vector<double>& omega) {
  return f.map([&](const MultiIndex& k, const CMat& c) {
    return CMat(c * Complex(0.0, k.dot(omega)));
  }, f.kind(), f.rows(), f.cols());
}

}  // namespace kam

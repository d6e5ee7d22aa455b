#include "kamreduce/theta_grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "kamreduce/error.hpp"

namespace kam {

namespace {

// fftw_plan_* and fftw_destroy_plan are not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftwBuffer {
 public:
  explicit FftwBuffer(std::size_t n)
      : p_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!p_) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(p_); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* get() { return p_; }
  Complex& at(std::size_t i) { return reinterpret_cast<Complex*>(p_)[i]; }

 private:
  fftw_complex* p_;
};

// In-place batched n-dimensional DFT over `howmany` contiguous arrays.
void run_dft(FftwBuffer& buf, int n, int g, int howmany, int sign) {
  std::vector<int> dims(static_cast<std::size_t>(n), g);
  int dist = 1;
  for (int j = 0; j < n; ++j) dist *= g;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_dft(n, dims.data(), howmany, buf.get(), nullptr, 1, dist,
                              buf.get(), nullptr, 1, dist, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw Error("FFTW planner failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

int wrap(int k, int g) { return ((k % g) + g) % g; }

}  // namespace

ThetaGrid::ThetaGrid(int n, int points_per_axis) : n_(n), g_(points_per_axis), size_(1) {
  if (n < 1 || n > kMaxTorusDim) throw ShapeMismatch("bad torus dimension");
  if (g_ < 2) throw ShapeMismatch("grid needs at least two points per axis");
  for (int j = 0; j < n; ++j) size_ *= static_cast<std::size_t>(g_);
}

std::vector<double> ThetaGrid::theta(std::size_t flat) const {
  std::vector<double> th(static_cast<std::size_t>(n_));
  for (int j = n_ - 1; j >= 0; --j) {
    th[j] = 2.0 * std::numbers::pi * static_cast<double>(flat % g_) / g_;
    flat /= g_;
  }
  return th;
}

std::vector<CMat> ThetaGrid::synthesize(const FourierSeries& f) const {
  if (f.dim() != n_) throw ShapeMismatch("synthesize: dimension mismatch");
  if (2 * f.axis_radius() >= g_) {
    throw AliasingError("synthesize: series support exceeds grid Nyquist band");
  }
  const int rows = f.rows(), cols = f.cols();
  const int howmany = rows * cols;
  FftwBuffer buf(size_ * howmany);
  for (std::size_t i = 0; i < size_ * howmany; ++i) buf.at(i) = 0.0;
  for (const auto& [k, c] : f.coeffs()) {
    std::size_t flat = 0;
    for (int j = 0; j < n_; ++j) flat = flat * g_ + wrap(k[j], g_);
    for (int e = 0; e < howmany; ++e) {
      buf.at(e * size_ + flat) += c(e % rows, e / rows);
    }
  }
  run_dft(buf, n_, g_, howmany, FFTW_BACKWARD);
  std::vector<CMat> out(size_, CMat(rows, cols));
  for (std::size_t p = 0; p < size_; ++p) {
    for (int e = 0; e < howmany; ++e) out[p](e % rows, e / rows) = buf.at(e * size_ + p);
  }
  return out;
}

FourierSeries ThetaGrid::analyze(const std::vector<CMat>& values, CoeffKind kind,
                                 int Kmax, double* alias_mass) const {
  if (values.size() != size_) throw ShapeMismatch("analyze: wrong number of values");
  const int rows = static_cast<int>(values[0].rows());
  const int cols = static_cast<int>(values[0].cols());
  const int howmany = rows * cols;
  FftwBuffer buf(size_ * howmany);
  for (std::size_t p = 0; p < size_; ++p) {
    for (int e = 0; e < howmany; ++e) buf.at(e * size_ + p) = values[p](e % rows, e / rows);
  }
  run_dft(buf, n_, g_, howmany, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(size_);
  FourierSeries f(n_, kind, rows, cols);
  double total = 0.0, high = 0.0;
  for (std::size_t p = 0; p < size_; ++p) {
    MultiIndex k(n_);
    std::size_t rem = p;
    bool nyquist = false;
    for (int j = n_ - 1; j >= 0; --j) {
      int m = static_cast<int>(rem % g_);
      rem /= g_;
      if (2 * m == g_) nyquist = true;
      k[j] = 2 * m > g_ ? m - g_ : m;
    }
    CMat c(rows, cols);
    for (int e = 0; e < howmany; ++e) c(e % rows, e / rows) = buf.at(e * size_ + p) * scale;
    const double nc = coeff_norm(c, kind);
    total += nc;
    if (nyquist || 4 * k.max_abs() > g_) high += nc;
    if (!nyquist && k.order() <= Kmax) f.add(k, c);
  }
  f.prune();
  if (alias_mass) *alias_mass = total > 0.0 ? high / total : 0.0;
  return f;
}

int grid_for_radius(int radius, int min_points) {
  int g = 2;
  const int need = std::max(min_points, 4 * (std::max(radius, 0) + 1));
  while (g < need) g *= 2;
  return g;
}

}  // namespace kam

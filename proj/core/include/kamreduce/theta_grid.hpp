#pragma once

#include <vector>

#include "kamreduce/fourier_series.hpp"

namespace kam {

// Uniform tensor grid of G points per axis on T^n, theta_j = 2 pi m_j / G.
// Points are flattened row-major with axis 0 slowest.
class ThetaGrid {
 public:
  ThetaGrid(int n, int points_per_axis);

  int dim() const { return n_; }
  int per_axis() const { return g_; }
  std::size_t size() const { return size_; }
  std::vector<double> theta(std::size_t flat) const;

  // Values f(theta) at every grid point. Requires axis_radius(f) < G/2.
  std::vector<CMat> synthesize(const FourierSeries& f) const;

  // Inverse of synthesize for band-limited data. Keeps |k| <= Kmax and
  // |k_j| < G/2. alias_mass (optional) receives the share of coefficient
  // mass with some |k_j| > G/4, the aliasing detector used by callers.
  FourierSeries analyze(const std::vector<CMat>& values, CoeffKind kind,
                        int Kmax, double* alias_mass = nullptr) const;

 private:
  int n_;
  int g_;
  std::size_t size_;
};

inline constexpr int kMaxGridPerAxis = 4096;

// Smallest power of two >= max(min_points, 4 * (radius + 1)).
int grid_for_radius(int radius, int min_points = 8);

}  // namespace kam

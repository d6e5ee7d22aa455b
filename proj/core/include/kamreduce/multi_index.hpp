#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace kam {

inline constexpr int kMaxTorusDim = 4;

// Integer frequency vector k in Z^n, n <= kMaxTorusDim. Unused slots stay 0.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int n);
  MultiIndex(std::initializer_list<int> k);
  explicit MultiIndex(const std::vector<int>& k);

  int dim() const { return n_; }
  int operator[](int j) const { return k_[static_cast<std::size_t>(j)]; }
  int& operator[](int j) { return k_[static_cast<std::size_t>(j)]; }

  // l1 order |k|.
  int order() const;
  int max_abs() const;
  double euclid() const;
  bool is_zero() const { return order() == 0; }
  double dot(const double* omega) const;
  double dot(const std::vector<double>& omega) const { return dot(omega.data()); }

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;
  MultiIndex operator-() const;

  std::vector<int> to_vector() const;
  std::string str() const;

  // Ordered by |k| first, then lexicographically.
  std::strong_ordering operator<=>(const MultiIndex& o) const;
  bool operator==(const MultiIndex& o) const = default;

  // All k with |k| <= K.
  static std::vector<MultiIndex> ball(int n, int K);

 private:
  std::array<int, kMaxTorusDim> k_{};
  int n_ = 1;
};

}  // namespace kam

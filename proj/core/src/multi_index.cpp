#include "kamreduce/multi_index.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "kamreduce/error.hpp"

namespace kam {

SmallDivisorError::SmallDivisorError(std::vector<int> k, std::string family,
                                     double value, double threshold)
    : Error([&] {
        std::string s = "small divisor in family '" + family + "' at k=(";
        for (std::size_t i = 0; i < k.size(); ++i) {
          s += (i ? "," : "") + std::to_string(k[i]);
        }
        s += "): |divisor|=" + std::to_string(value) +
             " < threshold " + std::to_string(threshold);
        return s;
      }()),
      k_(std::move(k)),
      family_(std::move(family)),
      value_(value),
      threshold_(threshold) {}

MultiIndex::MultiIndex(int n) : n_(n) {
  if (n < 1 || n > kMaxTorusDim) {
    throw ShapeMismatch("torus dimension must be in [1, " +
                        std::to_string(kMaxTorusDim) + "]");
  }
}

MultiIndex::MultiIndex(std::initializer_list<int> k)
    : MultiIndex(std::vector<int>(k)) {}

MultiIndex::MultiIndex(const std::vector<int>& k)
    : MultiIndex(static_cast<int>(k.size())) {
  for (int j = 0; j < n_; ++j) k_[j] = k[j];
}

int MultiIndex::order() const {
  int s = 0;
  for (int j = 0; j < n_; ++j) s += std::abs(k_[j]);
  return s;
}

int MultiIndex::max_abs() const {
  int s = 0;
  for (int j = 0; j < n_; ++j) s = std::max(s, std::abs(k_[j]));
  return s;
}

double MultiIndex::euclid() const {
  double s = 0;
  for (int j = 0; j < n_; ++j) s += double(k_[j]) * k_[j];
  return std::sqrt(s);
}

double MultiIndex::dot(const double* omega) const {
  double s = 0;
  for (int j = 0; j < n_; ++j) s += k_[j] * omega[j];
  return s;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  MultiIndex r(n_);
  for (int j = 0; j < n_; ++j) r.k_[j] = k_[j] + o.k_[j];
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  MultiIndex r(n_);
  for (int j = 0; j < n_; ++j) r.k_[j] = k_[j] - o.k_[j];
  return r;
}

MultiIndex MultiIndex::operator-() const {
  MultiIndex r(n_);
  for (int j = 0; j < n_; ++j) r.k_[j] = -k_[j];
  return r;
}

std::vector<int> MultiIndex::to_vector() const {
  return std::vector<int>(k_.begin(), k_.begin() + n_);
}

std::string MultiIndex::str() const {
  std::string s = "(";
  for (int j = 0; j < n_; ++j) s += (j ? "," : "") + std::to_string(k_[j]);
  return s + ")";
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& o) const {
  if (auto c = order() <=> o.order(); c != 0) return c;
  if (auto c = n_ <=> o.n_; c != 0) return c;
  for (int j = 0; j < n_; ++j) {
    if (auto c = k_[j] <=> o.k_[j]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::vector<MultiIndex> MultiIndex::ball(int n, int K) {
  std::vector<MultiIndex> out;
  if (K < 0) return out;
  MultiIndex k(n);
  // Recursive fill with remaining budget.
  std::function<void(int, int)> rec = [&](int axis, int budget) {
    if (axis == n) {
      out.push_back(k);
      return;
    }
    for (int v = -budget; v <= budget; ++v) {
      k[axis] = v;
      rec(axis + 1, budget - std::abs(v));
    }
    k[axis] = 0;
  };
  rec(0, K);
  return out;
}

}  // namespace kam

#include "kamreduce/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "kamreduce/error.hpp"
#include "kamreduce/rng.hpp"

namespace kam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  const double tol = 1e-14 * std::max(scale, 1.0);
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  return out;
}

// Distance from x to the nearest element of a sorted vector.
double nearest(const std::vector<double>& sorted, double x, double* which = nullptr) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  double best = kInf, arg = 0.0;
  if (it != sorted.end()) {
    best = std::abs(x - *it);
    arg = *it;
  }
  if (it != sorted.begin()) {
    const double c = *std::prev(it);
    if (std::abs(x - c) < best) {
      best = std::abs(x - c);
      arg = c;
    }
  }
  if (which) *which = arg;
  return best;
}

double margin(double divisor, int order, double gamma, double tau) {
  if (gamma <= 0.0) return divisor == 0.0 ? 0.0 : kInf;
  const double w = order == 0 ? 1.0 : 1.0 + std::pow(order, tau);
  return divisor * w / gamma;
}

// k != 0 with first nonzero component positive, |k| <= R.
std::vector<MultiIndex> half_ball(int n, int R) {
  std::vector<MultiIndex> out;
  for (const auto& k : MultiIndex::ball(n, R)) {
    for (int j = 0; j < n; ++j) {
      if (k[j] > 0) {
        out.push_back(k);
        break;
      }
      if (k[j] < 0) break;
    }
  }
  return out;
}

struct FamilyTable {
  Family family;
  std::vector<double> values;
  int range;
};

std::vector<FamilyTable> tables(const std::vector<double>& eigs, int K,
                                const FamilyMask& mask) {
  std::vector<FamilyTable> t;
  if (mask.diff) t.push_back({Family::kDiff, family_values(Family::kDiff, eigs), 2 * K});
  if (mask.quad) t.push_back({Family::kQuad, family_values(Family::kQuad, eigs), 2 * K});
  if (mask.single) t.push_back({Family::kSingle, family_values(Family::kSingle, eigs), K});
  if (mask.sum) t.push_back({Family::kSum, family_values(Family::kSum, eigs), K});
  return t;
}

// Checks that do not depend on omega (k = 0 terms).
void check_k0(const std::vector<double>& eigs, double gamma, double v0,
              const FamilyMask& mask, int n, DiophantineReport& r) {
  auto consider = [&](double div, double m, Family f) {
    if (m < r.min_margin) {
      r.min_margin = m;
      r.worst_k = MultiIndex(n);
      r.worst_family = f;
      r.worst_divisor = div;
    }
  };
  const std::size_t d = eigs.size();
  for (std::size_t i = 0; i < d; ++i) {
    if (mask.single) consider(std::abs(eigs[i]), std::abs(eigs[i]) / (0.5 * v0), Family::kSingle);
    for (std::size_t j = 0; j < d; ++j) {
      if (mask.diff && i != j) {
        const double div = std::abs(eigs[i] - eigs[j]);
        consider(div, margin(div, 0, gamma, 0.0), Family::kDiff);
      }
      if (mask.sum) {
        const double div = std::abs(eigs[i] + eigs[j]);
        consider(div, div / v0, Family::kSum);
      }
    }
  }
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::kDiff:
      return "diff";
    case Family::kQuad:
      return "quad_combo";
    case Family::kSingle:
      return "single";
    case Family::kSum:
      return "sum";
  }
  return "?";
}

std::vector<double> family_values(Family f, const std::vector<double>& mu) {
  std::vector<double> v;
  const std::size_t d = mu.size();
  switch (f) {
    case Family::kDiff:
      for (double a : mu)
        for (double b : mu) v.push_back(a - b);
      break;
    case Family::kSingle:
      for (double a : mu) {
        v.push_back(a);
        v.push_back(-a);
      }
      break;
    case Family::kSum:
      for (double a : mu)
        for (double b : mu) {
          v.push_back(a + b);
          v.push_back(-(a + b));
        }
      break;
    case Family::kQuad: {
      // All sign patterns over all index quadruples. Pairwise sums first.
      std::vector<double> pairs;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          for (int si : {-1, 1})
            for (int sj : {-1, 1}) pairs.push_back(si * mu[i] + sj * mu[j]);
      pairs = sorted_unique(std::move(pairs));
      for (double a : pairs)
        for (double b : pairs) v.push_back(a + b);
      break;
    }
  }
  return sorted_unique(std::move(v));
}

double divisor_min(const MultiIndex& k, const std::vector<double>& omega,
                   const std::vector<double>& eigs) {
  return nearest(family_values(Family::kDiff, eigs), k.dot(omega));
}

DiophantineReport check_admissible(const std::vector<double>& omega,
                                   const std::vector<double>& eigs, int K, double gamma,
                                   double tau, const AdmissibilityOptions& opt) {
  const int n = static_cast<int>(omega.size());
  DiophantineReport r;
  r.K = K;
  r.gamma = gamma;
  r.tau = tau;
  r.min_margin = kInf;
  r.worst_k = MultiIndex(n);
  double v0 = opt.v0;
  if (v0 <= 0.0) {
    v0 = kInf;
    for (double m : eigs) v0 = std::min(v0, std::abs(m));
  }
  check_k0(eigs, gamma, v0, opt.families, n, r);
  const auto tabs = tables(eigs, K, opt.families);
  int R = 0;
  for (const auto& t : tabs) R = std::max(R, t.range);
  for (const auto& k : half_ball(n, R)) {
    const double lam = k.dot(omega);
    const int ord = k.order();
    for (const auto& t : tabs) {
      if (ord > t.range || t.values.empty()) continue;
      double c = 0.0;
      const double div = nearest(t.values, lam, &c);
      const double m = margin(div, ord, gamma, tau);
      if (m < r.min_margin) {
        r.min_margin = m;
        r.worst_k = k;
        r.worst_family = t.family;
        r.worst_divisor = div;
      }
    }
  }
  r.admissible = r.min_margin >= 1.0;
  return r;
}

RussmannResult russmann_sum_check(const std::vector<double>& omega,
                                  const std::vector<double>& eigs, int m, double gamma,
                                  double tau) {
  const int n = static_cast<int>(omega.size());
  AdmissibilityOptions opt;
  opt.families = FamilyMask::diff_only();
  const auto rep = check_admissible(omega, eigs, m, gamma, tau, opt);
  if (!rep.admissible) {
    throw SmallDivisorError(rep.worst_k.to_vector(), to_string(rep.worst_family),
                            rep.worst_divisor,
                            gamma / (1.0 + std::pow(rep.worst_k.order(), tau)));
  }
  const auto diffs = family_values(Family::kDiff, eigs);
  RussmannResult res;
  for (const auto& k : half_ball(n, m)) {
    const double D = nearest(diffs, k.dot(omega));
    res.sum += 2.0 / (D * D);
  }
  res.bound = std::ldexp(1.0, 2 * n + 3) * std::pow(m, 2.0 * tau) / (gamma * gamma);
  res.ok = res.sum <= res.bound;
  return res;
}

double phist_tail_bound(double delta, double c, double p) {
  if (p < 0.0) throw Error("phist_tail_bound: p must be nonnegative");
  if (!(delta > 0.0)) throw Error("phist_tail_bound: delta must be positive");
  return c * std::exp(std::lgamma(p + 1.0) - p * std::log(delta));
}

MeasureEstimate measure_excised(int n, const std::vector<double>& eigs, int K, double gamma,
                                double tau, std::uint64_t samples, std::uint64_t seed,
                                const AdmissibilityOptions& opt, int threads) {
  const CounterRng rng(seed);
  threads = std::max(1, threads);
  std::vector<std::uint64_t> bad(static_cast<std::size_t>(threads), 0);
  auto worker = [&](int t) {
    const std::uint64_t lo = samples * t / threads, hi = samples * (t + 1) / threads;
    std::vector<double> omega(static_cast<std::size_t>(n));
    for (std::uint64_t i = lo; i < hi; ++i) {
      for (int j = 0; j < n; ++j) {
        omega[j] = 2.0 * std::numbers::pi * rng.uniform(i * n + j);
      }
      if (!check_admissible(omega, eigs, K, gamma, tau, opt).admissible) ++bad[t];
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  std::uint64_t total = 0;
  for (auto b : bad) total += b;
  MeasureEstimate est;
  est.samples = samples;
  est.fraction = samples ? static_cast<double>(total) / samples : 0.0;
  est.ci95 = samples ? 1.96 * std::sqrt(est.fraction * (1.0 - est.fraction) / samples) : 0.0;
  return est;
}

double exact_excised_fraction_1d(const std::vector<double>& eigs, int K, double gamma,
                                 double tau, const AdmissibilityOptions& opt) {
  const double L = 2.0 * std::numbers::pi;
  {
    DiophantineReport r;
    r.min_margin = kInf;
    double v0 = opt.v0;
    if (v0 <= 0.0) {
      v0 = kInf;
      for (double m : eigs) v0 = std::min(v0, std::abs(m));
    }
    check_k0(eigs, gamma, v0, opt.families, 1, r);
    if (r.min_margin < 1.0) return 1.0;
  }
  if (gamma <= 0.0) return 0.0;
  std::vector<std::pair<double, double>> iv;
  for (const auto& t : tables(eigs, K, opt.families)) {
    for (int k = 1; k <= t.range; ++k) {
      const double hw = gamma / ((1.0 + std::pow(k, tau)) * k);
      for (double c : t.values) {
        const double lo = std::max(0.0, c / k - hw), hi = std::min(L, c / k + hw);
        if (hi > lo) iv.emplace_back(lo, hi);
      }
    }
  }
  std::sort(iv.begin(), iv.end());
  double meas = 0.0, cur_lo = 0.0, cur_hi = -1.0;
  for (const auto& [lo, hi] : iv) {
    if (lo > cur_hi) {
      if (cur_hi > cur_lo) meas += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    } else {
      cur_hi = std::max(cur_hi, hi);
    }
  }
  if (cur_hi > cur_lo) meas += cur_hi - cur_lo;
  return meas / L;
}

}  // namespace kam

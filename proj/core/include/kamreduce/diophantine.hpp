#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kamreduce/multi_index.hpp"

namespace kam {

enum class Family { kDiff, kQuad, kSingle, kSum };
const char* to_string(Family f);

struct FamilyMask {
  bool diff = true;
  bool quad = true;
  bool single = true;
  bool sum = true;
  static FamilyMask diff_only() { return {true, false, false, false}; }
};

// Constants c such that a divisor reads |<k,omega> - c|; sorted, deduplicated.
std::vector<double> family_values(Family f, const std::vector<double>& eigs);

struct DiophantineReport {
  bool admissible = true;
  int K = 0;
  double gamma = 0.0;
  double tau = 0.0;
  MultiIndex worst_k;
  Family worst_family = Family::kDiff;
  double worst_divisor = 0.0;
  double min_margin = 0.0;  // +inf when nothing was checked
};

struct AdmissibilityOptions {
  FamilyMask families;
  // Threshold scale for k = 0 single/sum checks; <= 0 means min |eigs|.
  double v0 = 0.0;
};

// min_{i,j} |<k,omega> - mu_i + mu_j|
double divisor_min(const MultiIndex& k, const std::vector<double>& omega,
                   const std::vector<double>& eigs);

// Margin = |divisor| (1 + |k|^tau) / gamma, admissible iff every margin >= 1.
// diff/quad use 0 < |k| <= 2K (diff also k = 0, i != j); single/sum use |k| <= K,
// with the k = 0 terms normalized by v0/2 and v0 respectively.
DiophantineReport check_admissible(const std::vector<double>& omega,
                                   const std::vector<double>& eigs, int K, double gamma,
                                   double tau, const AdmissibilityOptions& opt = {});

struct RussmannResult {
  double sum = 0.0;
  double bound = 0.0;
  bool ok = false;
};
// sum_{0<|k|<=m} D_k^-2 against 2^(2n+3) m^(2 tau) / gamma^2. Throws
// SmallDivisorError when omega is not diff-admissible at level 2m.
RussmannResult russmann_sum_check(const std::vector<double>& omega,
                                  const std::vector<double>& eigs, int m, double gamma,
                                  double tau);

// c Gamma(p+1) / delta^p = int_0^inf e^-s c (s/delta)^p ds
double phist_tail_bound(double delta, double c, double p);

struct MeasureEstimate {
  double fraction = 0.0;
  double ci95 = 0.0;
  std::uint64_t samples = 0;
};
// Uniform Monte Carlo over omega in (0, 2 pi)^n. Deterministic for a given seed
// regardless of `threads`.
MeasureEstimate measure_excised(int n, const std::vector<double>& eigs, int K, double gamma,
                                double tau, std::uint64_t samples, std::uint64_t seed,
                                const AdmissibilityOptions& opt = {}, int threads = 1);

// n = 1 only: exact measure fraction of the excised union of intervals in (0, 2 pi).
double exact_excised_fraction_1d(const std::vector<double>& eigs, int K, double gamma,
                                 double tau, const AdmissibilityOptions& opt = {});

}  // namespace kam

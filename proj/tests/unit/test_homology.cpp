#include <gtest/gtest.h>

#include "kamreduce/error.hpp"
#include "kamreduce/homology.hpp"
#include "oracles.hpp"

using namespace kamtest;
using kam::DivisorPolicy;
using kam::NormalForm;
using kam::SylvesterSide;


TEST(Sylvester, ScalarCase) {
  const NormalForm h = NormalForm::diagonal({1.3});
  const CMat F = kam::solve_sylvester(MultiIndex{1}, {2.0}, h, CMat::Constant(1, 1, 1.0),
                                      SylvesterSide::kZZbar);
  EXPECT_NEAR(std::abs(F(0, 0) - Complex(0.0, -0.5)), 0.0, 1e-15);
}

TEST(Sylvester, ZeroRhsGivesZero) {
  Rand r(1);
  const NormalForm h(r.hermitian(3));
  for (auto side : {SylvesterSide::kZZbar, SylvesterSide::kZZ, SylvesterSide::kZbZb}) {
    EXPECT_EQ(kam::solve_sylvester(MultiIndex{2}, {1.7}, h, CMat::Zero(3, 3), side).norm(), 0.0);
  }
}

TEST(Sylvester, MatchesKroneckerSolve) {
  Rand r(2);
  int done = 0;
  while (done < 200) {
    const int d = 1 + done % 4;
    const int n = r.integer(1, 3);
    std::vector<double> om(n);
    for (auto& x : om) x = r.uniform(0.3, 2.5);
    const MultiIndex k = r.index(n, 6);
    const NormalForm h(r.hermitian(d, 2.0) + 3.0 * CMat::Identity(d, d));
    const auto side = static_cast<SylvesterSide>(r.integer(0, 2));
    if (min_divisor(k.dot(om), h.eigs, side) < 1e-2) continue;
    const CMat rhs = r.cmat(d, d);
    const CMat F = kam::solve_sylvester(k, om, h, rhs, side);
    const CMat Fo = kronecker_solve(k.dot(om), h.N, rhs, side);
    EXPECT_LE((F - Fo).norm(), 1e-10 * Fo.norm()) << "d=" << d;
    ++done;
  }
}

TEST(Sylvester, SmallDivisorCarriesDiagnostics) {
  const NormalForm h = NormalForm::diagonal({1.0, 1.5});
  DivisorPolicy pol{1e-3, 0.06};
  try {
    kam::solve_sylvester(MultiIndex{2}, {0.25}, h, CMat::Ones(2, 2), SylvesterSide::kZZbar, pol);
    FAIL() << "expected SmallDivisorError";
  } catch (const kam::SmallDivisorError& e) {
    EXPECT_EQ(e.k(), std::vector<int>{2});
    EXPECT_NEAR(e.value(), 0.0, 1e-15);
    EXPECT_NEAR(e.threshold(), 1e-3 / (1.0 + std::pow(2.0, 0.06)), 1e-15);
  }
}

TEST(Sylvester, NearThresholdWarns) {
  const NormalForm h = NormalForm::diagonal({1.0});
  std::vector<std::string> warnings;
  DivisorPolicy pol{1e-2, 0.06, 10.0, &warnings};
  kam::solve_sylvester(MultiIndex{1}, {0.04}, h, CMat::Ones(1, 1), SylvesterSide::kZZbar, pol);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(DerivativeSylvester, ZeroInputsGiveZero) {
  const NormalForm h = NormalForm::diagonal({1.0, 2.2});
  const CMat Z = CMat::Zero(2, 2);
  EXPECT_EQ(kam::derivative_sylvester(MultiIndex{1}, {0.7}, h, Z, Z, Z, 0).norm(), 0.0);
}

TEST(DerivativeSylvester, MatchesFiniteDifferences) {
  Rand r(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = r.integer(1, 3), n = r.integer(1, 2);
    std::vector<double> om(n);
    for (auto& x : om) x = r.uniform(0.3, 2.5);
    const MultiIndex k = r.index(n, 5);
    const int l = r.integer(0, n - 1);
    const CMat N0 = r.hermitian(d) + 3.0 * CMat::Identity(d, d), N1 = r.hermitian(d, 0.3);
    const CMat R0 = r.cmat(d, d), R1 = r.cmat(d, d);
    auto solve_at = [&](double shift) {
      std::vector<double> o = om;
      o[l] += shift;
      return kam::solve_sylvester(k, o, NormalForm(N0 + o[l] * N1), R0 + o[l] * R1,
                                  SylvesterSide::kZZbar);
    };
    const NormalForm h(N0 + om[l] * N1);
    if (min_divisor(k.dot(om), h.eigs, SylvesterSide::kZZbar) < 5e-2) continue;
    const CMat F = solve_at(0.0);
    const double step = 1e-6;
    const CMat fd = (solve_at(step) - solve_at(-step)) / (2 * step);
    const CMat dF = kam::derivative_sylvester(k, om, h, N1, F, R1, l);
    EXPECT_LE((dF - fd).norm(), 1e-5 * std::max(1.0, fd.norm()));
  }
}

TEST(Homological, ZeroPerturbation) {
  const NormalForm h = NormalForm::diagonal({1.0, 1.7});
  const auto sol = kam::solve_homological(h, QuadraticSymbol(1, 2), {1.618}, 8, 1e-3, 0.06, 1e-3);
  EXPECT_TRUE(sol.f.is_zero());
  EXPECT_TRUE(sol.remainder.is_zero());
  EXPECT_EQ(sol.N_inc.norm(), 0.0);
  EXPECT_EQ(sol.e_inc, Complex(0.0));
}

TEST(Homological, ConstantPerturbationIsAbsorbed) {
  Rand r(4);
  const NormalForm h = NormalForm::diagonal({1.0, 1.7});
  const auto q = constant_symbol(random_re_symbol(r, 1, 2, 0, 1));
  const double eps = 1e-3;
  const auto sol = kam::solve_homological(h, q, {1.618}, 8, 1e-3, 0.06, eps);
  const MultiIndex zero{0};
  EXPECT_LE((sol.N_inc - eps * q.zzbar.at(zero)).norm(), 1e-15);
  EXPECT_NEAR(std::abs(sol.e_inc - eps * q.theta.scalar_at(zero)), 0.0, 1e-15);
  EXPECT_TRUE(sol.remainder.is_zero());
  EXPECT_TRUE(sol.f.zzbar.empty());
  EXPECT_TRUE(sol.f.theta.empty());
  EXPECT_LE(sol.residual_norm, 1e-15);
}

TEST(Homological, CollocationResidualAndClasses) {
  Rand r(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = r.integer(1, 3), n = r.integer(1, 2), K = r.integer(3, 10);
    const std::vector<double> om = n == 1 ? std::vector<double>{1.6180339887}
                                          : std::vector<double>{1.6180339887, 2.2360679775};
    std::vector<double> v(d);
    for (int i = 0; i < d; ++i) v[i] = 1.0 + 0.37 * i;
    const NormalForm h = NormalForm::diagonal(v);
    const auto q = random_re_symbol(r, n, d, K + 3, 6, 0.3);
    const double eps = 1e-3;
    kam::HomologySolution sol;
    try {
      sol = kam::solve_homological(h, q, om, K, 0.0, 0.06, eps);
    } catch (const kam::SmallDivisorError&) {
      continue;
    }
    EXPECT_TRUE(kam::block_relations_hold(sol.f, 1e-12));
    EXPECT_TRUE(kam::satisfies_class(sol.remainder, kam::Reality::kRe, 1e-12));
    EXPECT_LE((sol.N_inc - sol.N_inc.adjoint()).norm(), 1e-15);
    EXPECT_NEAR(sol.e_inc.imag(), 0.0, 1e-15);
    for (const auto* b : {&sol.remainder.zz, &sol.remainder.zzbar, &sol.remainder.z,
                          &sol.remainder.theta}) {
      for (const auto& [k, c] : b->coeffs()) EXPECT_GT(k.order(), K);
    }
    const double scale = eps * kam::strip_norm(q, 0.0);
    EXPECT_LE(sol.residual_norm, 1e-9 * scale);
    const int G = n == 1 ? 128 : 32;
    for (int p = 0; p < 20; ++p) {
      std::vector<double> th(n);
      for (auto& t : th) t = kTwoPi * r.integer(0, G - 1) / G;
      const CVec z = r.cvec(d);
      const Complex def = homological_identity_defect(h, q, sol, om, eps, th, z, z.conjugate());
      const double zn = 1.0 + z.norm();
      EXPECT_LE(std::abs(def), 1e-9 * scale * std::sqrt(double(d)) * zn * zn);
    }
  }
}

TEST(Homological, RejectsNonReClass) {
  Rand r(6);
  const NormalForm h = NormalForm::diagonal({1.0});
  const auto q = random_symbol(r, 1, 1, 2, 3);
  EXPECT_THROW(kam::solve_homological(h, q, {1.618}, 4, 1e-3, 0.06, 1e-3), kam::ClassViolation);
}

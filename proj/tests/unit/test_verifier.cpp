#include <gtest/gtest.h>

#include "kamreduce/error.hpp"
#include "kamreduce/verifier.hpp"
#include "scenarios.hpp"
#include "support.hpp"

using namespace kamtest;

namespace {

CVec z0_of(const kam::Config& c) {
  return Eigen::Map<const CVec>(c.verify.z0.data(), c.problem.d);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST(Integrate, HarmonicRotationReturnsAfterOnePeriod) {
  const auto c = zero_forcing_config({1.0});
  const auto tr = kam::integrate_original(c.problem, CVec::Ones(1), kTwoPi, kTwoPi / 1000);
  EXPECT_NEAR(std::abs(tr.states.back()(0) - 1.0), 0.0, 1e-8);
  for (const auto& u : tr.states) EXPECT_NEAR(std::abs(u(0)), 1.0, 1e-10);
}

TEST(Integrate, ZeroDataWithoutLinearForcingStaysZero) {
  auto c = diagonal_config({1.0, 1.5}, {0.2, 0.1});
  const auto tr = kam::integrate_original(c.problem, CVec::Zero(2), 10.0, 0.01);
  for (const auto& u : tr.states) EXPECT_EQ(u.norm(), 0.0);
}

TEST(Integrate, SelfConvergenceIsFourthOrder) {
  const auto c = desk_config();
  std::vector<double> ldt, lerr;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const auto tr = kam::integrate_original(c.problem, z0_of(c), 10.0, dt);
    ldt.push_back(std::log(dt));
    lerr.push_back(std::log(tr.richardson_error));
  }
  EXPECT_NEAR(slope(ldt, lerr), 4.0, 0.3);
}

TEST(Integrate, HomogeneousProblemSuperposes) {
  auto c = desk_config();
  c.problem.W.xi = FourierSeries::vector(1, 1);
  Rand r(1);
  const CVec a = r.cvec(1), b = r.cvec(1);
  const auto ta = kam::integrate_original(c.problem, a, 5.0, 0.01);
  const auto tb = kam::integrate_original(c.problem, b, 5.0, 0.01);
  const auto tab = kam::integrate_original(c.problem, a + b, 5.0, 0.01);
  for (std::size_t i = 0; i < tab.states.size(); i += 50) {
    EXPECT_LE((tab.states[i] - ta.states[i] - tb.states[i]).norm(), 1e-12);
  }
}

TEST(Integrate, RejectsBadArguments) {
  const auto c = desk_config();
  EXPECT_THROW(kam::integrate_original(c.problem, CVec::Ones(1), 1.0, 0.0), kam::Error);
  EXPECT_THROW(kam::integrate_original(c.problem, CVec::Ones(2), 1.0, 0.1), kam::Error);
}

TEST(Conjugacy, ZeroForcingIsIntegratorExact) {
  const auto c = zero_forcing_config({1.0, 1.3});
  const auto rep = kam::run(c);
  const auto cr = kam::conjugacy_defect(rep, c.problem, z0_of(c), 100.0, 0.01);
  // Phi = id and h_inf = h_0: what remains is the integrator's own error.
  EXPECT_LE(cr.sup_defect, 2.0 * cr.richardson_error);
  EXPECT_TRUE(cr.bounds_ok());
}

TEST(Conjugacy, DiagonalClosedForm) {
  const auto c = diagonal_config({1.0, 1.7}, {0.3, -0.2});
  const auto rep = kam::run(c);
  const auto cr = kam::conjugacy_defect(rep, c.problem, z0_of(c), 100.0, 0.01);
  EXPECT_LE(cr.sup_defect, 1e-7);
}

TEST(Conjugacy, DeskScenario) {
  const auto c = desk_config();
  const auto rep = kam::run(c);
  ASSERT_TRUE(rep.converged);
  const auto cr = kam::conjugacy_defect(rep, c.problem, z0_of(c), 100.0, 0.01);
  EXPECT_LE(cr.sup_defect, 1e-4);
  EXPECT_LE(cr.richardson_error, 0.1 * 1e-4);
  EXPECT_LE(cr.energy_drift, 1e-10);
  EXPECT_TRUE(cr.bounds_ok());
  EXPECT_EQ(cr.times.size(), cr.defect_series.size());
  for (double x : cr.defect_series) EXPECT_GE(x, 0.0);
}

TEST(Conjugacy, RejectsUnconvergedReport) {
  const auto c = desk_config();
  kam::RunReport rep;
  rep.converged = false;
  EXPECT_THROW(kam::conjugacy_defect(rep, c.problem, z0_of(c), 1.0, 0.1), kam::Error);
}

TEST(Parseval, SingleCoefficient) {
  FourierSeries f = FourierSeries::scalar(2);
  f.add(MultiIndex{0, 0}, Complex(3.0, 4.0));
  EXPECT_DOUBLE_EQ(kam::parseval_lhs(f, 0.7), 25.0);
  EXPECT_TRUE(kam::parseval_check(f, 0.7, 5.0));
}

TEST(Parseval, GeometricSumsClosedForm) {
  for (int K : {1, 5, 20}) {
    for (double r : {0.0, 0.3, 1.0}) {
      FourierSeries f = FourierSeries::scalar(1);
      for (int k = -K; k <= K; ++k) f.add(MultiIndex{k}, Complex(1.0));
      const double q = std::exp(r), q2 = q * q;
      const double lhs = r == 0.0 ? 2 * K + 1 : 1 + 2 * q2 * (std::pow(q2, K) - 1) / (q2 - 1);
      const double sup = r == 0.0 ? 2 * K + 1 : 1 + 2 * q * (std::pow(q, K) - 1) / (q - 1);
      EXPECT_NEAR(kam::parseval_lhs(f, r), lhs, 1e-12 * lhs);
      EXPECT_NEAR(kam::strip_norm(f, r), sup, 1e-12 * sup);
      EXPECT_TRUE(kam::parseval_check(f, r, kam::strip_norm(f, r)));
    }
  }
}

TEST(Parseval, RandomSeries) {
  Rand r(2);
  for (int t = 0; t < 200; ++t) {
    const int n = r.integer(1, 3);
    const auto kind = static_cast<CoeffKind>(r.integer(0, 2));
    const int rows = kind == CoeffKind::kScalar ? 1 : r.integer(1, 3);
    const int cols = kind == CoeffKind::kMatrix ? rows : 1;
    const FourierSeries f = random_series(r, n, kind, rows, cols, 8, 12);
    const double rr = r.uniform(0.0, 1.0);
    EXPECT_TRUE(kam::parseval_check(f, rr, kam::strip_norm(f, rr)));
  }
}

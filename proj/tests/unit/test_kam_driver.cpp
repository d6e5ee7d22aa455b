#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>

#include "kamreduce/error.hpp"
#include "kamreduce/kam_driver.hpp"
#include "scenarios.hpp"
#include "support.hpp"

using namespace kamtest;

namespace {

kam::Schedule desk_schedule() { return kam::make_schedule(desk_config().schedule, 1, 14); }

kam::StepContext desk_context() { return {{std::numbers::phi}, {1.0}, kam::Limits{}}; }

Complex eval_packed(const QuadraticSymbol& q, const std::vector<double>& th, const CVec& u) {
  return eval_symbol(q, th, u.head(q.d), u.tail(q.d));
}

// omega . d_theta of every block, evaluated directly from coefficients.
Complex eval_dtheta(const QuadraticSymbol& f, const std::vector<double>& om,
                    const std::vector<double>& th, const CVec& u) {
  QuadraticSymbol g = f;
  for (auto* b : {&g.zz, &g.zzbar, &g.zbzb, &g.z, &g.zbar, &g.theta}) {
    FourierSeries out(b->dim(), b->kind(), b->rows(), b->cols());
    for (const auto& [k, c] : b->coeffs()) out.add(k, Complex(0.0, k.dot(om)) * c);
    *b = out;
  }
  return eval_packed(g, th, u);
}

}  // namespace

TEST(KamStep, ZeroPerturbationIsStationary) {
  const auto sched = desk_schedule();
  const auto state = kam::initial_state({1.0}, QuadraticSymbol(1, 1));
  const auto res = kam::kam_step(state, QuadraticSymbol(1, 1), sched, desk_context());
  EXPECT_EQ(res.next.m, 1);
  EXPECT_EQ((res.next.h.N - state.h.N).norm(), 0.0);
  EXPECT_LE(kam::distance_from_identity(res.phi), 1e-15);
  EXPECT_TRUE(res.next.q_prime.is_zero());
  EXPECT_SYMPLECTIC(res.next.phi_tilde);
}

TEST(KamStep, ConstantZZbarIsAbsorbed) {
  const auto sched = desk_schedule();
  QuadraticSymbol q(1, 1);
  q.zzbar.set(MultiIndex{0}, CMat::Constant(1, 1, 0.8));
  const auto state = kam::initial_state({1.0}, q);
  const auto res = kam::kam_step(state, QuadraticSymbol(1, 1), sched, desk_context());
  EXPECT_NEAR(res.next.h.N(0, 0).real(), 1.0 + sched.eps[0] * 0.8, 1e-16);
  EXPECT_TRUE(res.solution.f.is_zero());
  EXPECT_LE(kam::distance_from_identity(res.phi), 1e-15);
  EXPECT_TRUE(res.next.q_prime.is_zero());
}

// (h_m + eps_m q'_m)(Phi_m u) - eps_m int_0^1 (omega.d_theta f)(X^kappa u) dkappa
//   = h_{m+1}(u) + eps_{m+1} q_{m+1}(u)
TEST(KamStep, PointwiseConjugacyIdentity) {
  const auto sched = desk_schedule();
  const auto ctx = desk_context();
  Rand r(1);
  const auto q = random_re_symbol(r, 1, 1, 3, 3, 0.3);
  const auto state = kam::initial_state({1.0}, q);
  const auto res = kam::kam_step(state, QuadraticSymbol(1, 1), sched, ctx);
  const double eps = sched.eps[0];
  const auto& f = res.solution.f;
  ASSERT_FALSE(f.is_zero());
  EXPECT_SYMPLECTIC(res.phi);
  const auto h0 = kam::normal_form_symbol(1, state.h.N, state.h.e);
  const auto h1 = kam::normal_form_symbol(1, res.next.h.N, res.next.h.e);
  using Quad = boost::math::quadrature::gauss<double, 20>;
  for (int p = 0; p < 50; ++p) {
    const auto th = r.theta(1);
    const CVec u = r.cvec(2);
    const CVec w = res.phi.apply(th, u);
    const Complex lhs0 = eval_packed(h0, th, w) + eps * eval_packed(q, th, w);
    auto part = [&](double kappa, bool im) {
      const Complex v =
          eval_dtheta(f, ctx.omega, th, kam::time_one_map(f, kappa * eps).apply(th, u));
      return im ? v.imag() : v.real();
    };
    const Complex kernel(Quad::integrate([&](double k) { return part(k, false); }, 0.0, 1.0),
                         Quad::integrate([&](double k) { return part(k, true); }, 0.0, 1.0));
    const Complex lhs = lhs0 - eps * kernel;
    const Complex rhs = eval_packed(h1, th, u) + eval_packed(res.new_perturbation, th, u);
    EXPECT_LE(std::abs(lhs - rhs), 1e-7 * eps) << "point " << p;
  }
}

TEST(Run, ZeroForcingConvergesImmediately) {
  const auto c = zero_forcing_config({1.0, 1.6});
  const auto rep = kam::run(c);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.steps, 0);
  EXPECT_EQ(rep.e_inf, Complex(0.0));
  EXPECT_EQ(rep.v_inf[0], 1.0);
  EXPECT_EQ(rep.v_inf[1], 1.6);
  EXPECT_LE(kam::distance_from_identity(rep.phi), 1e-15);
  EXPECT_TRUE(rep.bounds_ok());
}

TEST(Run, DiagonalForcingMatchesClosedForm) {
  const std::vector<double> v{1.0, 1.7}, D{0.3, -0.2};
  const auto c = diagonal_config(v, D);
  const auto rep = kam::run(c);
  ASSERT_TRUE(rep.converged) << rep.error;
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(rep.v_inf[j], v[j] + 2.0 * c.problem.epsilon * D[j], 1e-10);
  EXPECT_NEAR(std::abs(rep.e_inf), 0.0, 1e-15);
  EXPECT_LE(kam::distance_from_identity(rep.phi), 1e-15);
}

TEST(Run, DeskScenarioMeetsAprioriBounds) {
  const auto c = desk_config();
  const auto rep = kam::run(c);
  ASSERT_TRUE(rep.converged) << rep.status << ": " << rep.error;
  EXPECT_TRUE(rep.bounds_ok());
  const double half = std::sqrt(1e-3);
  EXPECT_LE(std::abs(rep.v_inf[0] - 1.0), half);
  EXPECT_LE(std::abs(rep.e_inf), half);
  EXPECT_LE(kam::distance_from_identity(rep.phi), std::pow(1e-3, 0.25));
  EXPECT_SYMPLECTIC(rep.phi);
  ASSERT_TRUE(rep.limit.has_value());
  EXPECT_LE(rep.limit->reconstruction_error, 1e-10);
  EXPECT_LE(rep.limit->hamiltonian_defect, 1e-10);
  EXPECT_LE((rep.N_inf - rep.N_inf.adjoint()).norm(), 1e-15);
  for (const auto& s : rep.history) {
    EXPECT_LE(s.symplectic_defect, kSymplecticTol);
    EXPECT_LE(s.residual, 1e-9 * std::max(s.eps_qprime, 1e-300));
  }
}

TEST(Run, ContractionFromStepOne) {
  const auto rep = kam::run(desk_config());
  ASSERT_TRUE(rep.converged);
  ASSERT_GE(rep.history.size(), 3u);
  for (std::size_t m = 1; m + 1 < rep.history.size(); ++m) {
    EXPECT_GE(rep.history[m].eps_qprime / rep.history[m + 1].eps_qprime, 5.0) << "m=" << m;
  }
}

TEST(Run, IsDeterministic) {
  const auto a = kam::run(desk_config()), b = kam::run(desk_config());
  EXPECT_EQ(a.v_inf, b.v_inf);
  EXPECT_EQ(a.phi.linear.distance(b.phi.linear), 0.0);
}

TEST(Run, ResonantFrequencyReportsSmallDivisor) {
  auto c = desk_config();
  c.problem.omega = {2.0};  // 2 v: single family resonance at k = 1
  c.schedule.eps0 = 1e-3;
  const auto rep = kam::run(c);
  EXPECT_FALSE(rep.converged);
  EXPECT_EQ(rep.status, "small_divisor");
  EXPECT_NE(rep.error.find("k="), std::string::npos);
  ASSERT_TRUE(rep.last_admissibility.has_value());
  EXPECT_FALSE(rep.last_admissibility->admissible);
}

TEST(Run, RejectsBadProblems) {
  auto c = desk_config();
  c.problem.v = {-1.0};
  EXPECT_THROW(kam::run(c), kam::ConfigError);
  c = diagonal_config({1.0, 1.0001}, {0.0, 0.0});
  EXPECT_THROW(kam::run(c), kam::ConfigError);
}

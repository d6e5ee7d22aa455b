#include "kamreduce/homology.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "kamreduce/error.hpp"

namespace kam {

namespace {

const Complex kI(0.0, 1.0);

double threshold(const MultiIndex& k, const DivisorPolicy& p) {
  const int ord = k.order();
  return p.gamma / (ord == 0 ? 1.0 : 1.0 + std::pow(ord, p.tau));
}

// Guards one divisor; returns its normalized margin.
double guard(double div, const MultiIndex& k, const char* family, const DivisorPolicy& p) {
  const double thr = threshold(k, p);
  if (std::abs(div) < thr || div == 0.0) {
    throw SmallDivisorError(k.to_vector(), family, std::abs(div), thr);
  }
  if (p.warnings && std::abs(div) < p.warn_factor * thr) {
    p.warnings->push_back(std::string("near-threshold divisor in ") + family + " at k=" +
                          k.str() + ": margin " + std::to_string(std::abs(div) / thr));
  }
  return thr > 0.0 ? std::abs(div) / thr : std::numeric_limits<double>::infinity();
}

CMat sym(const CMat& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

NormalForm::NormalForm(const CMat& n, Complex e_) : e(e_), N(0.5 * (n + n.adjoint())) {
  Eigen::SelfAdjointEigenSolver<CMat> es(N);
  eigs = es.eigenvalues();
  U = es.eigenvectors();
}

NormalForm NormalForm::diagonal(const std::vector<double>& v) {
  RVec vv = Eigen::Map<const RVec>(v.data(), static_cast<Eigen::Index>(v.size()));
  return NormalForm(vv.cast<Complex>().asDiagonal().toDenseMatrix());
}

CMat solve_sylvester(const MultiIndex& k, const std::vector<double>& omega,
                     const NormalForm& h, const CMat& rhs, SylvesterSide side,
                     const DivisorPolicy& policy) {
  const double lam = k.dot(omega);
  const int d = h.d();
  const CMat& U = h.U;
  const RVec& mu = h.eigs;
  CMat rt, F(d, d);
  switch (side) {
    case SylvesterSide::kZZbar:
      rt = U.adjoint() * rhs * U;
      break;
    case SylvesterSide::kZZ:
      rt = U.adjoint() * rhs * U.conjugate();
      break;
    case SylvesterSide::kZbZb:
      rt = U.transpose() * rhs * U;
      break;
  }
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      double div = 0.0;
      const char* fam = "diff";
      switch (side) {
        case SylvesterSide::kZZbar:
          div = lam - mu(a) + mu(b);
          break;
        case SylvesterSide::kZZ:
          div = lam - mu(a) - mu(b);
          fam = "sum";
          break;
        case SylvesterSide::kZbZb:
          div = lam + mu(a) + mu(b);
          fam = "sum";
          break;
      }
      // The zzbar operator at k = 0 with a = b is singular by design; the
      // caller routes that mode to the normal form instead.
      guard(div, k, fam, policy);
      F(a, b) = -kI * rt(a, b) / div;
    }
  }
  switch (side) {
    case SylvesterSide::kZZbar:
      return U * F * U.adjoint();
    case SylvesterSide::kZZ:
      return U * F * U.transpose();
    case SylvesterSide::kZbZb:
      return U.conjugate() * F * U.adjoint();
  }
  return F;
}

CMat derivative_sylvester(const MultiIndex& k, const std::vector<double>& omega,
                          const NormalForm& h, const CMat& dN, const CMat& F,
                          const CMat& drhs, int l, const DivisorPolicy& policy) {
  const CMat extra = -static_cast<double>(k[l]) * F + (dN * F - F * dN);
  // op(dF) = -i drhs + extra  <=>  op(dF) = -i (drhs + i extra)
  return solve_sylvester(k, omega, h, drhs + kI * extra, SylvesterSide::kZZbar, policy);
}

QuadraticSymbol homological_defect(const NormalForm& h, const QuadraticSymbol& q,
                                   const HomologySolution& sol,
                                   const std::vector<double>& omega, double eps, int Kmax) {
  const QuadraticSymbol hs = normal_form_symbol(q.n, h.N, 0.0);
  QuadraticSymbol lhs = poisson_bracket(hs, sol.f, Kmax).value;
  QuadraticSymbol dtf = sol.f;
  for (auto* b : {&dtf.zz, &dtf.zzbar, &dtf.zbzb, &dtf.z, &dtf.zbar, &dtf.theta}) {
    *b = omega_derivative(*b, omega);
  }
  lhs = (lhs - dtf + q) * eps;
  QuadraticSymbol rhs = normal_form_symbol(q.n, sol.N_inc, sol.e_inc) + sol.remainder;
  // Antisymmetric parts of zz/zbzb do not contribute to values; compare the
  // packed representatives.
  return unpack(pack(lhs - rhs), q.n, q.d, Reality::kNone);
}

HomologySolution solve_homological(const NormalForm& h, const QuadraticSymbol& q,
                                   const std::vector<double>& omega, int K, double gamma,
                                   double tau, double eps, const HomologyOptions& opt) {
  if (q.d != h.d() || q.n != static_cast<int>(omega.size())) {
    throw ShapeMismatch("solve_homological: dimension mismatch");
  }
  if (!satisfies_class(q, Reality::kRe, 1e-9)) {
    throw ClassViolation("solve_homological: perturbation is not in the Re class");
  }
  const int n = q.n, d = q.d;
  HomologySolution sol;
  sol.f = QuadraticSymbol(n, d, Reality::kRe);
  sol.remainder = QuadraticSymbol(n, d, Reality::kRe);
  sol.N_inc = CMat::Zero(d, d);
  sol.min_divisor_margin = std::numeric_limits<double>::infinity();
  DivisorPolicy pol{gamma, tau, 10.0, &sol.warnings};
  auto track = [&](double m) { sol.min_divisor_margin = std::min(sol.min_divisor_margin, m); };
  const MultiIndex zero(n);

  auto split = [&](const FourierSeries& blk, FourierSeries& rem) {
    Truncation t = truncate(blk, K);
    rem = t.tail * eps;
    return t.low;
  };

  for (const FourierSeries low = split(q.zzbar, sol.remainder.zzbar); const auto& [k, Q] : low.coeffs()) {
    if (k == zero) {
      sol.N_inc = eps * 0.5 * (Q + Q.adjoint());
      continue;
    }
    sol.f.zzbar.set(k, solve_sylvester(k, omega, h, Q, SylvesterSide::kZZbar, pol));
  }
  for (const FourierSeries low = split(q.zz, sol.remainder.zz); const auto& [k, Q] : low.coeffs()) {
    sol.f.zz.set(k, sym(solve_sylvester(k, omega, h, sym(Q), SylvesterSide::kZZ, pol)));
  }
  for (const FourierSeries low = split(q.zbzb, sol.remainder.zbzb); const auto& [k, Q] : low.coeffs()) {
    sol.f.zbzb.set(k, sym(solve_sylvester(k, omega, h, sym(Q), SylvesterSide::kZbZb, pol)));
  }
  for (const FourierSeries low = split(q.z, sol.remainder.z); const auto& [k, Q] : low.coeffs()) {
    const double lam = k.dot(omega);
    CVec rt = h.U.adjoint() * Q;
    for (int a = 0; a < d; ++a) {
      const double div = lam - h.eigs(a);
      track(guard(div, k, "single", pol));
      rt(a) *= -kI / div;
    }
    sol.f.z.set(k, h.U * rt);
  }
  for (const FourierSeries low = split(q.zbar, sol.remainder.zbar); const auto& [k, Q] : low.coeffs()) {
    const double lam = k.dot(omega);
    CVec rt = h.U.transpose() * Q;
    for (int a = 0; a < d; ++a) {
      const double div = lam + h.eigs(a);
      track(guard(div, k, "single", pol));
      rt(a) *= -kI / div;
    }
    sol.f.zbar.set(k, h.U.conjugate() * rt);
  }
  for (const FourierSeries low = split(q.theta, sol.remainder.theta); const auto& [k, Q] : low.coeffs()) {
    if (k == zero) {
      sol.e_inc = eps * Q(0, 0);
      continue;
    }
    const double lam = k.dot(omega);
    track(guard(lam, k, "diff", pol));
    sol.f.theta.add(k, -kI * Q(0, 0) / lam);
  }
  sol.f.prune();
  sol.remainder.prune();

  if (opt.check_residual) {
    sol.residual_norm =
        strip_norm(homological_defect(h, q, sol, omega, eps, opt.Kmax), opt.strip);
  }
  return sol;
}

}  // namespace kam

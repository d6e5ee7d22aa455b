#include "kamreduce/verifier.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "kamreduce/error.hpp"

namespace kam {

namespace {

struct LinearField {
  PackedSymbol packed;
  CMat S;
  std::vector<double> omega;

  CVec operator()(double t, const CVec& u) const {
    std::vector<double> th(omega.size());
    for (std::size_t j = 0; j < omega.size(); ++j) th[j] = omega[j] * t;
    return S * (packed.H.evaluate(th) * u + packed.g.evaluate(th));
  }
};

std::vector<CVec> rk4(const LinearField& F, const CVec& u0, double dt, long steps,
                      long stride) {
  std::vector<CVec> out;
  out.reserve(static_cast<std::size_t>(steps / stride + 1));
  CVec u = u0;
  out.push_back(u);
  for (long i = 0; i < steps; ++i) {
    const double t = i * dt;
    const CVec k1 = F(t, u);
    const CVec k2 = F(t + 0.5 * dt, u + 0.5 * dt * k1);
    const CVec k3 = F(t + 0.5 * dt, u + 0.5 * dt * k2);
    const CVec k4 = F(t + dt, u + dt * k3);
    u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((i + 1) % stride == 0) out.push_back(u);
  }
  return out;
}

CVec initial_u(const CVec& z0) {
  CVec u(2 * z0.size());
  u << z0, z0.conjugate();
  return u;
}

}  // namespace

Trajectory integrate_original(const Problem& p, const CVec& z0, double T, double dt) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw Error("integrate_original: need dt > 0, T >= 0");
  if (z0.size() != p.d) throw ShapeMismatch("integrate_original: z0 must have d entries");
  const QuadraticSymbol h = original_symbol(p);
  const LinearField F{pack(h), symplectic_S(p.d), p.omega};
  const long steps = std::lround(T / dt);
  const CVec u0 = initial_u(z0);
  const auto coarse = rk4(F, u0, dt, steps, 1);
  const auto fine = rk4(F, u0, 0.5 * dt, 2 * steps, 2);
  Trajectory tr;
  for (long i = 0; i <= steps; ++i) {
    const double t = i * dt;
    tr.times.push_back(t);
    tr.states.push_back(fine[i]);
    std::vector<double> th(p.omega.size());
    for (std::size_t j = 0; j < th.size(); ++j) th[j] = p.omega[j] * t;
    const CVec& u = fine[i];
    tr.energy.push_back(h.evaluate(th, u.head(p.d), u.tail(p.d)).real());
    tr.richardson_error =
        std::max(tr.richardson_error, (coarse[i] - fine[i]).norm() / 15.0);
  }
  return tr;
}

bool ConjugacyReport::bounds_ok() const {
  if (bound_checks.empty()) return false;
  for (const auto& b : bound_checks) {
    if (!b.pass) return false;
  }
  return true;
}

ConjugacyReport conjugacy_defect(const RunReport& report, const Problem& p, const CVec& z0,
                                 double T, double dt) {
  if (!report.converged) throw Error("conjugacy_defect: run did not converge");
  const Trajectory tr = integrate_original(p, z0, T, dt);
  const int D = 2 * p.d;
  CMat Hinf = CMat::Zero(D, D);
  Hinf.topRightCorner(p.d, p.d) = report.N_inf;
  Hinf.bottomLeftCorner(p.d, p.d) = report.N_inf.transpose();
  const CMat gen = symplectic_S(p.d) * Hinf;
  const QuadraticSymbol hinf = normal_form_symbol(p.n, report.N_inf, report.e_inf);

  ConjugacyReport cr;
  cr.richardson_error = tr.richardson_error;
  cr.bound_checks = report.bounds;
  const std::vector<double> th0(p.omega.size(), 0.0);
  const CVec w0 = report.phi.apply_inverse(th0, tr.states.front());
  const double e0 = hinf.evaluate(th0, w0.head(p.d), w0.tail(p.d)).real();
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double t = tr.times[i];
    std::vector<double> th(p.omega.size());
    for (std::size_t j = 0; j < th.size(); ++j) th[j] = p.omega[j] * t;
    const CVec w = (t * gen).exp() * w0;
    const CVec u = report.phi.apply(th, w);
    const double rel = (u - tr.states[i]).norm() / std::max(tr.states[i].norm(), 1e-300);
    cr.times.push_back(t);
    cr.defect_series.push_back(rel);
    cr.sup_defect = std::max(cr.sup_defect, rel);
    cr.energy_drift = std::max(
        cr.energy_drift, std::abs(hinf.evaluate(th, w.head(p.d), w.tail(p.d)).real() - e0));
  }
  return cr;
}

double parseval_lhs(const FourierSeries& f, double r) {
  double s = 0.0;
  for (const auto& [k, c] : f.coeffs()) {
    const double nc = coeff_norm(c, f.kind());
    s += nc * nc * std::exp(2.0 * k.order() * r);
  }
  return s;
}

bool parseval_check(const FourierSeries& f, double r, double sup_est) {
  return parseval_lhs(f, r) <= std::ldexp(1.0, f.dim()) * sup_est * sup_est;
}

}  // namespace kam

#include "kamreduce/smoothing.hpp"

#include <cmath>

#include "kamreduce/error.hpp"

namespace kam {

double bump_multiplier(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double s = 2.0 * t - 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return 1.0 - a / (a + b);
}

FourierSeries smooth_approx(const FourierSeries& f, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("smooth_approx: sigma must be positive");
  return f.map([sigma](const MultiIndex& k, const CMat& c) {
    return CMat(c * bump_multiplier(sigma * k.euclid()));
  }, f.kind(), f.rows(), f.cols());
}

QuadraticSymbol smooth_approx(const QuadraticSymbol& q, double sigma) {
  QuadraticSymbol r = q;
  for (auto* f : {&r.zz, &r.zzbar, &r.zbzb, &r.z, &r.zbar, &r.theta}) {
    *f = smooth_approx(*f, sigma);
  }
  return r;
}

double decay_constant(const RealBlocks& w, double ell) {
  double c = 0.0;
  for (const auto* f : {&w.xx, &w.xxi, &w.xixi, &w.x, &w.xi, &w.theta}) {
    for (const auto& [k, v] : f->coeffs()) {
      c = std::max(c, coeff_norm(v, f->kind()) * std::pow(1.0 + k.order(), ell + 1.0));
    }
  }
  return c;
}

SmoothInput certify(const RealBlocks& w, double ell, double c_max) {
  SmoothInput in{w, ell, decay_constant(w, ell)};
  if (in.c_ell > c_max) {
    throw ConfigError("coefficient decay certificate failed: C_ell = " +
                      std::to_string(in.c_ell) + " exceeds " + std::to_string(c_max));
  }
  return in;
}

Decomposition decompose(const QuadraticSymbol& q0, const Schedule& sched, int M) {
  if (M < 1) throw ConfigError("decompose: need at least one part");
  if (M > sched.steps()) {
    throw ScheduleError("decompose: schedule exhausted (eps_m underflow); lower M");
  }
  Decomposition dec;
  QuadraticSymbol prev(q0.n, q0.d, q0.reality);
  for (int m = 0; m < M; ++m) {
    QuadraticSymbol cur = smooth_approx(q0, sched.sigma[m]);
    QuadraticSymbol part = (cur - prev) * (1.0 / sched.eps[m]);
    part.reality = q0.reality;
    dec.parts.push_back(part);
    dec.sigma.push_back(sched.sigma[m]);
    dec.eps.push_back(sched.eps[m]);
    prev = std::move(cur);
  }
  dec.residual = q0 - prev;
  dec.residual.reality = q0.reality;
  dec.residual_norm = strip_norm(dec.residual, 0.0);
  return dec;
}

}  // namespace kam

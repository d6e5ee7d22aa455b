#pragma once

#include <Eigen/Dense>
#include <algorithm>

#include "kamreduce/homology.hpp"
#include "support.hpp"

namespace kamtest {

// Dense d^2 x d^2 solve of the Sylvester operator, column-major vec.
inline CMat kronecker_solve(double lam, const CMat& N, const CMat& rhs, kam::SylvesterSide side) {
  const int d = static_cast<int>(N.rows());
  const CMat I = CMat::Identity(d, d);
  auto kron = [d](const CMat& a, const CMat& b) {
    CMat out(d * d, d * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out.block(i * d, j * d, d, d) = a(i, j) * b;
    return out;
  };
  CMat op;
  switch (side) {
    case kam::SylvesterSide::kZZbar:
      op = kron(I, lam * I - N) + kron(N.transpose(), I);
      break;
    case kam::SylvesterSide::kZZ:
      op = kron(I, lam * I - N) - kron(N, I);
      break;
    case kam::SylvesterSide::kZbZb:
      op = kron(I, lam * I + N.transpose()) + kron(N.transpose(), I);
      break;
  }
  const CMat b = Complex(0, -1) * rhs;
  const CVec x = op.fullPivLu().solve(Eigen::Map<const CVec>(b.data(), d * d));
  return Eigen::Map<const CMat>(x.data(), d, d);
}

inline double min_divisor(double lam, const kam::RVec& mu, kam::SylvesterSide side) {
  double m = 1e300;
  for (int a = 0; a < mu.size(); ++a)
    for (int b = 0; b < mu.size(); ++b) {
      const double v = side == kam::SylvesterSide::kZZbar ? lam - mu(a) + mu(b)
                       : side == kam::SylvesterSide::kZZ  ? lam - mu(a) - mu(b)
                                                          : lam + mu(a) + mu(b);
      m = std::min(m, std::abs(v));
    }
  return m;
}

inline CMat dtheta_eval(const FourierSeries& f, const std::vector<double>& th,
                        const std::vector<double>& omega) {
  CMat out = CMat::Zero(f.rows(), f.cols());
  for (const auto& [k, c] : f.coeffs()) {
    double phase = 0.0;
    for (int j = 0; j < f.dim(); ++j) phase += k[j] * th[j];
    out += Complex(0.0, k.dot(omega)) * c * std::polar(1.0, phase);
  }
  return out;
}

// eps {h, f} + eps q - eps omega.d f - <z, Nt zbar> - et - r at one point, from
// block gradients: {h, f} = -i h_z . f_zbar + i h_zbar . f_z.
inline Complex homological_identity_defect(const kam::NormalForm& h, const QuadraticSymbol& q,
                                           const kam::HomologySolution& s,
                                           const std::vector<double>& omega, double eps,
                                           const std::vector<double>& th, const CVec& z,
                                           const CVec& zb) {
  const Complex I(0.0, 1.0);
  const CMat Fzz = eval_series(s.f.zz, th), Fzzb = eval_series(s.f.zzbar, th),
             Fzbzb = eval_series(s.f.zbzb, th);
  const CVec Fz = eval_series(s.f.z, th), Fzb = eval_series(s.f.zbar, th);
  const CVec fz = (Fzz + Fzz.transpose()) * z + Fzzb * zb + Fz;
  const CVec fzb = Fzzb.transpose() * z + (Fzbzb + Fzbzb.transpose()) * zb + Fzb;
  const CVec hz = h.N * zb, hzb = h.N.transpose() * z;
  const Complex bracket = -I * hz.cwiseProduct(fzb).sum() + I * hzb.cwiseProduct(fz).sum();
  const Complex dtf = (z.transpose() * dtheta_eval(s.f.zz, th, omega) * z)(0, 0) +
                      (z.transpose() * dtheta_eval(s.f.zzbar, th, omega) * zb)(0, 0) +
                      (zb.transpose() * dtheta_eval(s.f.zbzb, th, omega) * zb)(0, 0) +
                      (dtheta_eval(s.f.z, th, omega).transpose() * z)(0, 0) +
                      (dtheta_eval(s.f.zbar, th, omega).transpose() * zb)(0, 0) +
                      dtheta_eval(s.f.theta, th, omega)(0, 0);
  const Complex nf = (z.transpose() * s.N_inc * zb)(0, 0) + s.e_inc;
  return eps * bracket + eps * eval_symbol(q, th, z, zb) - eps * dtf - nf -
         eval_symbol(s.remainder, th, z, zb);
}

}  // namespace kamtest

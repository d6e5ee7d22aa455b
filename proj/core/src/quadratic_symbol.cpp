#include "kamreduce/quadratic_symbol.hpp"

#include <cmath>
#include <set>

#include "kamreduce/error.hpp"

namespace kam {

namespace {

const Complex kI(0.0, 1.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

CMat sym(const CMat& a) { return 0.5 * (a + a.transpose()); }

std::set<MultiIndex> support_union(std::initializer_list<const FourierSeries*> fs) {
  std::set<MultiIndex> ks;
  for (const auto* f : fs) {
    for (const auto& [k, c] : f->coeffs()) {
      ks.insert(k);
      ks.insert(-k);
    }
  }
  return ks;
}

double rel_scale(const QuadraticSymbol& q) {
  return std::max(strip_norm(q, 0.0), 1e-300);
}

}  // namespace

const char* to_string(Reality r) {
  switch (r) {
    case Reality::kRe:
      return "Re";
    case Reality::kIm:
      return "Im";
    case Reality::kNone:
      return "none";
  }
  return "none";
}

Reality reality_from_string(const std::string& s) {
  if (s == "Re") return Reality::kRe;
  if (s == "Im") return Reality::kIm;
  if (s == "none") return Reality::kNone;
  throw ConfigError("unknown reality class '" + s + "'");
}

QuadraticSymbol::QuadraticSymbol(int n_, int d_, Reality r)
    : n(n_),
      d(d_),
      zz(FourierSeries::matrix(n_, d_, d_)),
      zzbar(FourierSeries::matrix(n_, d_, d_)),
      zbzb(FourierSeries::matrix(n_, d_, d_)),
      z(FourierSeries::vector(n_, d_)),
      zbar(FourierSeries::vector(n_, d_)),
      theta(FourierSeries::scalar(n_)),
      reality(r) {}

bool QuadraticSymbol::is_zero() const {
  return zz.empty() && zzbar.empty() && zbzb.empty() && z.empty() && zbar.empty() &&
         theta.empty();
}

void QuadraticSymbol::prune() {
  for (auto* f : {&zz, &zzbar, &zbzb, &z, &zbar, &theta}) f->prune();
}

QuadraticSymbol QuadraticSymbol::operator+(const QuadraticSymbol& o) const {
  QuadraticSymbol r = *this;
  r += o;
  return r;
}

QuadraticSymbol& QuadraticSymbol::operator+=(const QuadraticSymbol& o) {
  if (n != o.n || d != o.d) throw ShapeMismatch("symbol dimension mismatch");
  zz += o.zz;
  zzbar += o.zzbar;
  zbzb += o.zbzb;
  z += o.z;
  zbar += o.zbar;
  theta += o.theta;
  if (reality != o.reality) reality = Reality::kNone;
  return *this;
}

QuadraticSymbol QuadraticSymbol::operator-(const QuadraticSymbol& o) const {
  return *this + o * Complex(-1.0);
}

QuadraticSymbol QuadraticSymbol::operator*(Complex s) const {
  QuadraticSymbol r = *this;
  for (auto* f : {&r.zz, &r.zzbar, &r.zbzb, &r.z, &r.zbar, &r.theta}) *f *= s;
  if (s.imag() != 0.0) r.reality = Reality::kNone;
  return r;
}

int QuadraticSymbol::radius() const {
  int r = -1;
  for (const auto* f : {&zz, &zzbar, &zbzb, &z, &zbar, &theta}) r = std::max(r, f->radius());
  return r;
}

int QuadraticSymbol::axis_radius() const {
  int r = -1;
  for (const auto* f : {&zz, &zzbar, &zbzb, &z, &zbar, &theta}) {
    r = std::max(r, f->axis_radius());
  }
  return r;
}

Complex QuadraticSymbol::evaluate(const std::vector<double>& th, const CVec& zv,
                                  const CVec& zb) const {
  Complex v = (zv.transpose() * zz.evaluate(th) * zv)(0, 0);
  v += (zv.transpose() * zzbar.evaluate(th) * zb)(0, 0);
  v += (zb.transpose() * zbzb.evaluate(th) * zb)(0, 0);
  v += (z.evaluate(th).transpose() * zv)(0, 0);
  v += (zbar.evaluate(th).transpose() * zb)(0, 0);
  v += theta.evaluate(th)(0, 0);
  return v;
}

double strip_norm(const QuadraticSymbol& q, double s) {
  double sum = 0.0;
  for (const auto* f : {&q.zz, &q.zzbar, &q.zbzb, &q.z, &q.zbar, &q.theta}) {
    sum += strip_norm(*f, s);
  }
  return sum;
}

double distance(const QuadraticSymbol& a, const QuadraticSymbol& b) {
  return std::max({a.zz.distance(b.zz), a.zzbar.distance(b.zzbar),
                   a.zbzb.distance(b.zbzb), a.z.distance(b.z), a.zbar.distance(b.zbar),
                   a.theta.distance(b.theta)});
}

bool block_relations_hold(const QuadraticSymbol& q, double tol) {
  const double cut = tol * rel_scale(q);
  for (const auto& k : support_union({&q.zz, &q.zzbar, &q.zbzb, &q.z, &q.zbar})) {
    if ((q.zzbar.at(k) - q.zzbar.at(-k).adjoint()).cwiseAbs().maxCoeff() > cut) return false;
    if ((sym(q.zbzb.at(k)) - sym(q.zz.at(-k)).conjugate()).cwiseAbs().maxCoeff() > cut) {
      return false;
    }
    if ((q.zbar.at(k) - q.z.at(-k).conjugate()).cwiseAbs().maxCoeff() > cut) return false;
  }
  return true;
}

bool satisfies_class(const QuadraticSymbol& q, Reality r, double tol) {
  if (r == Reality::kNone) return true;
  if (!block_relations_hold(q, tol)) return false;
  const double cut = tol * rel_scale(q);
  const double sign = r == Reality::kRe ? 1.0 : -1.0;
  for (const auto& k : support_union({&q.theta})) {
    if (std::abs(q.theta.scalar_at(k) - sign * std::conj(q.theta.scalar_at(-k))) > cut) {
      return false;
    }
  }
  return true;
}

CMat symplectic_S(int d) {
  CMat S = CMat::Zero(2 * d, 2 * d);
  S.topRightCorner(d, d) = -kI * CMat::Identity(d, d);
  S.bottomLeftCorner(d, d) = kI * CMat::Identity(d, d);
  return S;
}

PackedSymbol pack(const QuadraticSymbol& q) {
  const int d = q.d, n = q.n;
  PackedSymbol p{FourierSeries::matrix(n, 2 * d, 2 * d), FourierSeries::vector(n, 2 * d),
                 q.theta};
  for (const auto& k : support_union({&q.zz, &q.zzbar, &q.zbzb})) {
    CMat H(2 * d, 2 * d);
    const CMat x = q.zzbar.at(k);
    H << 2.0 * sym(q.zz.at(k)), x, x.transpose(), 2.0 * sym(q.zbzb.at(k));
    if (H.cwiseAbs().maxCoeff() > 0.0) p.H.set(k, H);
  }
  for (const auto& k : support_union({&q.z, &q.zbar})) {
    CMat g(2 * d, 1);
    g << q.z.at(k), q.zbar.at(k);
    if (g.cwiseAbs().maxCoeff() > 0.0) p.g.set(k, g);
  }
  return p;
}

QuadraticSymbol unpack(const PackedSymbol& p, int n, int d, Reality r) {
  QuadraticSymbol q(n, d, r);
  for (const auto& [k, H] : p.H.coeffs()) {
    q.zz.set(k, 0.5 * H.topLeftCorner(d, d));
    q.zbzb.set(k, 0.5 * H.bottomRightCorner(d, d));
    q.zzbar.set(k, 0.5 * (H.topRightCorner(d, d) + H.bottomLeftCorner(d, d).transpose()));
  }
  for (const auto& [k, g] : p.g.coeffs()) {
    q.z.set(k, g.topRows(d));
    q.zbar.set(k, g.bottomRows(d));
  }
  q.theta = p.c;
  q.prune();
  return q;
}

BracketResult poisson_bracket(const QuadraticSymbol& f, const QuadraticSymbol& g, int Kmax) {
  if (f.n != g.n || f.d != g.d) throw ShapeMismatch("poisson_bracket: dimension mismatch");
  const int d = f.d;
  const CMat S = symplectic_S(d);
  const PackedSymbol pf = pack(f), pg = pack(g);
  const FourierSeries SHf = pf.H.left_mul(S, CoeffKind::kMatrix);
  const FourierSeries SHg = pg.H.left_mul(S, CoeffKind::kMatrix);
  const FourierSeries Sgf = pf.g.left_mul(S, CoeffKind::kVector);
  const FourierSeries Sgg = pg.g.left_mul(S, CoeffKind::kVector);

  double dropped = 0.0;
  auto mul = [&](const FourierSeries& a, const FourierSeries& b) {
    Product p = multiply(a, b, Kmax);
    dropped += p.dropped_norm;
    return p.value;
  };
  PackedSymbol out{mul(pf.H, SHg) - mul(pg.H, SHf), mul(pf.H, Sgg) - mul(pg.H, Sgf),
                   FourierSeries::scalar(f.n)};
  Product c = inner(pf.g, Sgg, Kmax);
  out.c = c.value;
  dropped += c.dropped_norm;
  const bool real = block_relations_hold(f, 1e-9) && block_relations_hold(g, 1e-9);
  return {unpack(out, f.n, d, real ? Reality::kRe : Reality::kNone), dropped};
}

RealBlocks::RealBlocks(int n_, int d_)
    : n(n_),
      d(d_),
      xx(FourierSeries::matrix(n_, d_, d_)),
      xxi(FourierSeries::matrix(n_, d_, d_)),
      xixi(FourierSeries::matrix(n_, d_, d_)),
      x(FourierSeries::vector(n_, d_)),
      xi(FourierSeries::vector(n_, d_)),
      theta(FourierSeries::scalar(n_)) {}

double RealBlocks::evaluate(const std::vector<double>& th, const RVec& xv,
                            const RVec& xiv) const {
  const CVec cx = xv.cast<Complex>(), cxi = xiv.cast<Complex>();
  Complex v = (cx.transpose() * xx.evaluate(th) * cx)(0, 0);
  v += (cx.transpose() * xxi.evaluate(th) * cxi)(0, 0);
  v += (cxi.transpose() * xixi.evaluate(th) * cxi)(0, 0);
  v += (x.evaluate(th).transpose() * cx)(0, 0);
  v += (xi.evaluate(th).transpose() * cxi)(0, 0);
  v += theta.evaluate(th)(0, 0);
  return v.real();
}

bool is_real_valued(const FourierSeries& f, double tol) {
  const double cut = tol * std::max(f.max_coeff_norm(), 1e-300);
  for (const auto& [k, c] : f.coeffs()) {
    if ((c - f.at(-k).conjugate()).cwiseAbs().maxCoeff() > cut) return false;
  }
  return true;
}

QuadraticSymbol from_real_blocks(const RealBlocks& w) {
  for (const auto* f : {&w.xx, &w.xxi, &w.xixi, &w.x, &w.xi, &w.theta}) {
    if (!is_real_valued(*f)) {
      throw ClassViolation("from_real_blocks: input block is not real on real theta");
    }
  }
  QuadraticSymbol q(w.n, w.d, Reality::kRe);
  q.zz = (w.xixi - w.xx + w.xxi * kI) * 0.5;
  q.zbzb = (w.xixi - w.xx - w.xxi * kI) * 0.5;
  q.zzbar = (w.xixi + w.xixi.transpose() + w.xx + w.xx.transpose() + w.xxi * kI -
             w.xxi.transpose() * kI) *
            0.5;
  q.z = (w.xi + w.x * kI) * kInvSqrt2;
  q.zbar = (w.xi - w.x * kI) * kInvSqrt2;
  q.theta = w.theta;
  q.reality = Reality::kRe;
  return q;
}

RealBlocks to_real_blocks(const QuadraticSymbol& q) {
  RealBlocks w(q.n, q.d);
  const FourierSeries P = (q.zz + q.zz.transpose()) * 0.5;
  const FourierSeries Pb = (q.zbzb + q.zbzb.transpose()) * 0.5;
  const FourierSeries Z = (q.zzbar + q.zzbar.transpose()) * 0.5;
  const FourierSeries Za = (q.zzbar - q.zzbar.transpose()) * 0.5;
  w.xxi = (P - Pb + Za) * (-kI);
  w.xx = (Z - P - Pb) * 0.5;
  w.xixi = (Z + P + Pb) * 0.5;
  w.x = (q.z - q.zbar) * (-kI * kInvSqrt2);
  w.xi = (q.z + q.zbar) * kInvSqrt2;
  w.theta = q.theta;
  return w;
}

QuadraticSymbol normal_form_symbol(int n, const CMat& N, Complex e) {
  QuadraticSymbol h(n, static_cast<int>(N.rows()), Reality::kRe);
  h.zzbar.set(MultiIndex(n), N);
  h.zzbar.prune();
  if (e != Complex(0.0)) h.theta.set(MultiIndex(n), CMat::Constant(1, 1, e));
  return h;
}

}  // namespace kam

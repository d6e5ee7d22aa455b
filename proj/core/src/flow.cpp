#include "kamreduce/flow.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "kamreduce/error.hpp"
#include "kamreduce/theta_grid.hpp"

namespace kam {

namespace {

const Complex kI(0.0, 1.0);

double norm1(const CMat& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }
double norm1(const Eigen::MatrixXd& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

int default_grid(const ThetaAffineMap& m, int grid_points) {
  if (grid_points > 0) return grid_points;
  const int r = std::max({m.linear.axis_radius(), m.shift.axis_radius(), 0});
  return grid_for_radius(r, 8);
}

double real_symplectic_defect(const CMat& Mr) {
  const int d = static_cast<int>(Mr.rows()) / 2;
  const CMat J = standard_J(d).cast<Complex>();
  return norm1(CMat(Mr.transpose() * J * Mr - J));
}

}  // namespace

ThetaAffineMap ThetaAffineMap::identity(int n, int d, MapRep rep) {
  ThetaAffineMap m;
  m.n = n;
  m.d = d;
  m.rep = rep;
  m.linear = FourierSeries::constant(n, CoeffKind::kMatrix, CMat::Identity(2 * d, 2 * d));
  m.shift = FourierSeries::vector(n, 2 * d);
  return m;
}

CMat ThetaAffineMap::linear_at(const std::vector<double>& th) const {
  return linear.evaluate(th);
}

CVec ThetaAffineMap::shift_at(const std::vector<double>& th) const {
  return shift.evaluate(th);
}

CVec ThetaAffineMap::apply(const std::vector<double>& th, const CVec& u) const {
  return linear_at(th) * u + shift_at(th);
}

CVec ThetaAffineMap::apply_inverse(const std::vector<double>& th, const CVec& u) const {
  return linear_at(th).partialPivLu().solve(CVec(u - shift_at(th)));
}

CMat complex_from_real(int d) {
  const double s = 1.0 / std::sqrt(2.0);
  CMat T = CMat::Zero(2 * d, 2 * d);
  const CMat I = CMat::Identity(d, d);
  T.topLeftCorner(d, d) = -kI * s * I;
  T.topRightCorner(d, d) = s * I;
  T.bottomLeftCorner(d, d) = kI * s * I;
  T.bottomRightCorner(d, d) = s * I;
  return T;
}

Eigen::MatrixXd standard_J(int d) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  J.topRightCorner(d, d).setIdentity();
  J.bottomLeftCorner(d, d) = -Eigen::MatrixXd::Identity(d, d);
  return J;
}

ThetaAffineMap to_real(const ThetaAffineMap& m) {
  if (m.rep == MapRep::kRealXXi) return m;
  const CMat T = complex_from_real(m.d);
  const CMat Ti = T.adjoint();
  ThetaAffineMap r = m;
  r.rep = MapRep::kRealXXi;
  r.linear = m.linear.left_mul(Ti, CoeffKind::kMatrix).right_mul(T);
  r.shift = m.shift.left_mul(Ti, CoeffKind::kVector);
  return r;
}

double symplectic_defect(const ThetaAffineMap& m, int grid_points) {
  const ThetaAffineMap r = to_real(m);
  const ThetaGrid grid(m.n, default_grid(m, grid_points));
  double worst = 0.0;
  for (const auto& Mr : grid.synthesize(r.linear)) {
    worst = std::max(worst, real_symplectic_defect(Mr));
  }
  return worst;
}

double distance_from_identity(const ThetaAffineMap& m, int grid_points) {
  const ThetaAffineMap r = to_real(m);
  const ThetaGrid grid(m.n, default_grid(m, grid_points));
  const auto Ms = grid.synthesize(r.linear);
  const auto cs = grid.synthesize(r.shift);
  const CMat I = CMat::Identity(2 * m.d, 2 * m.d);
  double worst = 0.0;
  for (std::size_t p = 0; p < Ms.size(); ++p) {
    worst = std::max({worst, norm1(CMat(Ms[p] - I)), cs[p].norm()});
  }
  return worst;
}

HamiltonianMatrixPair generator_blocks(const QuadraticSymbol& f, double eps) {
  if (!block_relations_hold(f, 1e-9)) {
    throw ClassViolation("generator_blocks: generator violates the block relations");
  }
  const CMat S = symplectic_S(f.d);
  const PackedSymbol p = pack(f);
  return {p.H.left_mul(S, CoeffKind::kMatrix) * eps, p.g.left_mul(S, CoeffKind::kVector) * eps};
}

ThetaAffineMap time_one_map(const QuadraticSymbol& f, double eps, const FlowOptions& opt) {
  const HamiltonianMatrixPair gen = generator_blocks(f, eps);
  const int n = f.n, d = f.d, D = 2 * f.d;
  if (gen.A.empty() && gen.b.empty()) return ThetaAffineMap::identity(n, d);
  const int radius = std::max({gen.A.axis_radius(), gen.b.axis_radius(), 0});
  int G = grid_for_radius(radius, opt.min_grid);
  ThetaAffineMap out;
  out.n = n;
  out.d = d;
  out.rep = MapRep::kComplexZZbar;
  std::vector<CMat> Mv, cv;
  for (;;) {
    const ThetaGrid grid(n, G);
    const auto Av = grid.synthesize(gen.A);
    const auto bv = grid.synthesize(gen.b);
    Mv.assign(grid.size(), CMat());
    cv.assign(grid.size(), CMat());
    CMat aug = CMat::Zero(D + 1, D + 1);
    for (std::size_t p = 0; p < grid.size(); ++p) {
      aug.topLeftCorner(D, D) = Av[p];
      aug.topRightCorner(D, 1) = bv[p];
      const CMat E = aug.exp();
      Mv[p] = E.topLeftCorner(D, D);
      cv[p] = E.topRightCorner(D, 1);
    }
    double am = 0.0, ac = 0.0;
    out.linear = grid.analyze(Mv, CoeffKind::kMatrix, opt.Kmax, &am);
    out.shift = grid.analyze(cv, CoeffKind::kVector, opt.Kmax, &ac);
    if (std::max(am, ac) <= opt.alias_tol) break;
    if (2 * G > kMaxGridPerAxis) {
      throw AliasingError("time_one_map: aliasing persists at the maximal grid size");
    }
    G *= 2;
  }
  const CMat T = complex_from_real(d);
  for (const auto& M : Mv) {
    const double def = real_symplectic_defect(T.adjoint() * M * T);
    if (def > opt.symplectic_tol) {
      throw Error("time_one_map: symplectic defect " + std::to_string(def) +
                  " exceeds tolerance");
    }
  }
  return out;
}

MapProduct compose(const ThetaAffineMap& outer, const ThetaAffineMap& inner, int Kmax) {
  if (outer.rep != inner.rep) throw ShapeMismatch("compose: representation mismatch");
  if (outer.n != inner.n || outer.d != inner.d) {
    throw ShapeMismatch("compose: dimension mismatch");
  }
  MapProduct r{outer, 0.0};
  Product lin = multiply(outer.linear, inner.linear, Kmax);
  Product sh = multiply(outer.linear, inner.shift, Kmax);
  r.value.linear = lin.value;
  r.value.shift = sh.value + outer.shift;
  r.dropped_norm = lin.dropped_norm + sh.dropped_norm;
  return r;
}

BracketResult pullback(const QuadraticSymbol& q, const ThetaAffineMap& phi, int Kmax) {
  if (phi.rep != MapRep::kComplexZZbar) {
    throw ShapeMismatch("pullback: map must be in the (z, zbar) representation");
  }
  if (q.n != phi.n || q.d != phi.d) throw ShapeMismatch("pullback: dimension mismatch");
  const PackedSymbol p = pack(q);
  double dropped = 0.0;
  auto mul = [&](const FourierSeries& a, const FourierSeries& b) {
    Product pr = multiply(a, b, Kmax);
    dropped += pr.dropped_norm;
    return pr.value;
  };
  auto dot = [&](const FourierSeries& a, const FourierSeries& b) {
    Product pr = inner(a, b, Kmax);
    dropped += pr.dropped_norm;
    return pr.value;
  };
  const FourierSeries Mt = phi.linear.transpose();
  const FourierSeries Hc = mul(p.H, phi.shift);
  PackedSymbol out{mul(Mt, mul(p.H, phi.linear)), mul(Mt, Hc + p.g),
                   p.c + dot(phi.shift, Hc) * 0.5 + dot(p.g, phi.shift)};
  // Symmetrize the quadratic part against round-off.
  out.H = (out.H + out.H.transpose()) * 0.5;
  return {unpack(out, q.n, q.d, q.reality), dropped};
}

LieResult lie_transform(const QuadraticSymbol& g, const QuadraticSymbol& f, double eps,
                        LieWeight w, double tol, int Kmax, int max_terms) {
  LieResult res{QuadraticSymbol(g.n, g.d, g.reality), 0, 0.0};
  QuadraticSymbol cur = g;
  double factor = 1.0;  // eps^j / j!
  for (int j = 0; j < max_terms; ++j) {
    if (cur.is_zero()) return res;
    const double cj = w == LieWeight::kOne ? 1.0 / (j + 1.0) : 1.0 / ((j + 1.0) * (j + 2.0));
    const QuadraticSymbol term = cur * (factor * cj);
    res.value += term;
    res.terms = j + 1;
    const double tn = strip_norm(term, 0.0);
    if (tn <= tol * std::max(strip_norm(res.value, 0.0), 1e-300)) return res;
    BracketResult next = poisson_bracket(cur, f, Kmax);
    res.dropped_norm += next.dropped_norm * factor;
    cur = std::move(next.value);
    factor *= eps / (j + 1.0);
  }
  throw DivergenceError("lie_transform: series did not reach tolerance in " +
                        std::to_string(max_terms) + " terms (eps [f] too large)");
}

LimitMap limit_log(const std::vector<ThetaAffineMap>& maps, int Kmax, int min_grid) {
  if (maps.empty()) throw Error("limit_log: empty map list");
  LimitMap out;
  out.composed = maps.front();
  for (std::size_t i = 1; i < maps.size(); ++i) {
    MapProduct p = compose(out.composed, maps[i], Kmax);
    out.composed = std::move(p.value);
    out.dropped_norm += p.dropped_norm;
  }
  const ThetaAffineMap real = to_real(out.composed);
  const int n = real.n, D = 2 * real.d;
  const Eigen::MatrixXd J = standard_J(real.d);
  out.V = real.shift;
  int G = grid_for_radius(std::max(real.linear.axis_radius(), 0), min_grid);
  for (;;) {
    const ThetaGrid grid(n, G);
    const auto Ms = grid.synthesize(real.linear);
    std::vector<CMat> As(grid.size());
    out.hamiltonian_defect = 0.0;
    out.reconstruction_error = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const Eigen::MatrixXd Mr = Ms[p].real();
      const double dist = norm1(Eigen::MatrixXd(Mr - Eigen::MatrixXd::Identity(D, D)));
      if (!(dist < 0.5)) {
        throw Error("limit_log: composed linear part too far from identity (" +
                    std::to_string(dist) + ")");
      }
      const Eigen::MatrixXd A = Mr.log();
      const Eigen::MatrixXd JA = J * A;
      out.hamiltonian_defect = std::max(out.hamiltonian_defect,
                                        norm1(Eigen::MatrixXd(JA - JA.transpose())));
      out.reconstruction_error =
          std::max(out.reconstruction_error, norm1(Eigen::MatrixXd(A.exp() - Mr)));
      As[p] = A.cast<Complex>();
    }
    double am = 0.0;
    out.A = grid.analyze(As, CoeffKind::kMatrix, Kmax, &am);
    if (am <= 1e-12) break;
    if (2 * G > kMaxGridPerAxis) throw AliasingError("limit_log: aliasing persists");
    G *= 2;
  }
  if (out.hamiltonian_defect > 1e-9) {
    throw Error("limit_log: logarithm is not a Hamiltonian matrix (defect " +
                std::to_string(out.hamiltonian_defect) + ")");
  }
  return out;
}

}  // namespace kam

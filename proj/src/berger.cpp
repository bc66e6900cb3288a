#include "fourcurv/berger.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace fourcurv {

namespace {

// J_a = sqrt(2) w_a as a 4x4 matrix; each family squares to -I and the two
// families commute, so p0 I + p.J is orthogonal for unit p.
std::array<Mat4, 3> generators(bool plus) {
  const Bivectors bv = duality_basis();
  std::array<Mat4, 3> j;
  for (int a = 0; a < 3; ++a) j[a] = std::sqrt(2.0) * (plus ? bv.plus[a] : bv.minus[a]);
  return j;
}

Mat4 quaternion_matrix(const Eigen::Quaterniond& q, const std::array<Mat4, 3>& j) {
  return q.w() * Mat4::Identity() + q.x() * j[0] + q.y() * j[1] + q.z() * j[2];
}

void orient(Mat3& v) {
  if (v.determinant() < 0) v.col(0) = -v.col(0);
}

double pattern_residual(const Tensor4& t, const Mat4& frame, const Mat6& target) {
  return (pair_matrix(rotate(t, frame)) - target).cwiseAbs().maxCoeff();
}

double pattern_objective(const Tensor4& t, const Mat4& frame, const Mat6& target) {
  return (pair_matrix(rotate(t, frame)) - target).squaredNorm();
}

Mat4 givens(int i, int j, double th) {
  Mat4 g = Mat4::Identity();
  g(i, i) = g(j, j) = std::cos(th);
  g(i, j) = -std::sin(th);
  g(j, i) = std::sin(th);
  return g;
}

// Direct minimization of the off-pattern norm over SO(4) by sweeps of plane
// rotations, each angle found by sampling plus golden-section refinement.
Mat4 givens_descent(const Tensor4& t, Mat4 frame, const Mat6& target) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double best = pattern_objective(t, frame, target);
  for (int sweep = 0; sweep < 60; ++sweep) {
    const double start = best;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        auto f = [&](double th) { return pattern_objective(t, frame * givens(i, j, th), target); };
        const int n = 72;
        const double step = 2.0 * std::numbers::pi / n;
        double th0 = 0.0, f0 = best;
        for (int s = 1; s < n; ++s) {
          const double th = -std::numbers::pi + s * step;
          const double v = f(th);
          if (v < f0) { f0 = v; th0 = th; }
        }
        double lo = th0 - step, hi = th0 + step;
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = f(c), fd = f(d);
        for (int it = 0; it < 80; ++it) {
          if (fc < fd) { hi = d; d = c; fd = fc; c = hi - gr * (hi - lo); fc = f(c); }
          else { lo = c; c = d; fc = fd; d = lo + gr * (hi - lo); fd = f(d); }
        }
        const double th = 0.5 * (lo + hi);
        const double v = f(th);
        if (v < best) { best = v; frame = frame * givens(i, j, th); }
      }
    if (start - best <= 1e-30 + 1e-15 * start) break;
  }
  return frame;
}

// Orthonormal basis of the complement of the unit vector x, as columns.
Eigen::Matrix<double, 4, 3> perp_basis(const Vec4& x) {
  Eigen::HouseholderQR<Eigen::Matrix<double, 4, 1>> qr(x);
  const Mat4 q = qr.householderQ();
  return q.rightCols<3>();
}

// S_X(j,l) = sum_ik R_ijkl X_i X_k, so R(X,Y,X,Y) = Y^T S_X Y.
Mat4 sectional_form(const Tensor4& t, const Vec4& x) {
  Mat4 s = Mat4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const double w = x[i] * x[k];
      if (w == 0.0) continue;
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) s(j, l) += w * t(i, j, k, l);
    }
  return 0.5 * (s + s.transpose());
}

// Minimizer of Y^T S Y over unit Y orthogonal to x.
std::pair<Vec4, double> best_partner(const Tensor4& t, const Vec4& x) {
  const auto p = perp_basis(x);
  const Mat3 s = p.transpose() * sectional_form(t, x) * p;
  Eigen::SelfAdjointEigenSolver<Mat3> es(s);
  return {p * es.eigenvectors().col(0), es.eigenvalues()[0]};
}

}  // namespace

Mat6 berger_pattern(const Vec3& a, const Vec3& b) {
  Mat6 m = Mat6::Zero();
  for (int i = 0; i < 3; ++i) {
    m(i, i) = m(i + 3, i + 3) = a[i];
    m(i, i + 3) = m(i + 3, i) = b[i];
  }
  return m;
}

BergerForm berger_form(const CurvatureTensor& t) {
  const double tn = norm(t);
  const CurvDecomposition dec = standard_decompose(t);
  if (dec.traceless_ricci.norm() > kEinsteinTol * tn)
    throw NotEinstein("Berger form needs vanishing traceless Ricci (got " +
                      std::to_string(dec.traceless_ricci.norm() / tn) + " relative)");

  BergerForm bf;
  const DualityBlocks blk = to_blocks(t);
  Vec3 alpha, beta;
  Mat3 u, v;
  sym_eigen3(blk.m_plus, alpha, u);
  sym_eigen3(blk.m_minus, beta, v);
  orient(u);
  orient(v);
  bf.a = 0.5 * (alpha + beta);
  bf.b = 0.5 * (alpha - beta);
  const Mat6 target = berger_pattern(bf.a, bf.b);
  if (tn == 0.0) return bf;

  const auto jp = generators(true);
  const auto jm = generators(false);
  const Eigen::Quaterniond p(u), q(v);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pp : {p, p.conjugate()})
    for (const auto& qq : {q, q.conjugate()}) {
      const Mat4 o = quaternion_matrix(pp.normalized(), jp) * quaternion_matrix(qq.normalized(), jm);
      const double r = pattern_residual(t.tensor(), o, target);
      if (r < best) {
        best = r;
        bf.frame = o;
      }
    }
  const double tol = 1e-8 * tn;
  if (best > tol) {
    bf.used_fallback = true;
    bf.frame = givens_descent(t.tensor(), bf.frame, target);
    best = pattern_residual(t.tensor(), bf.frame, target);
  }
  bf.residual = best;
  if (best > tol)
    throw FrameRecoveryFailure("Berger frame residual " + std::to_string(best / tn) + " relative after fallback");
  return bf;
}

double sectional(const CurvatureTensor& t, const Vec4& x, const Vec4& y) {
  const double den = x.squaredNorm() * y.squaredNorm() - std::pow(x.dot(y), 2);
  if (!(den > 1e-14 * x.squaredNorm() * y.squaredNorm())) throw DegeneratePlane("vectors span no plane");
  return evaluate(t.tensor(), x, y, x, y) / den;
}

ExtremalPlane extremal_plane(const CurvatureTensor& t, int starts, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ExtremalPlane best;
  best.value = std::numeric_limits<double>::infinity();
  const int total = starts + 4;
  for (int s = 0; s < total; ++s) {
    Vec4 x;
    if (s < 4) x = Vec4::Unit(s);
    else x = Vec4(nd(rng), nd(rng), nd(rng), nd(rng)).normalized();
    auto [y, val] = best_partner(t.tensor(), x);
    for (int it = 0; it < 1000; ++it) {
      auto [x2, v2] = best_partner(t.tensor(), y);
      auto [y2, v3] = best_partner(t.tensor(), x2);
      x = x2;
      y = y2;
      const double prev = val;
      val = std::min(v2, v3);
      if (std::abs(prev - val) <= 1e-16 * (1.0 + std::abs(val))) break;
    }
    if (val < best.value) {
      best.value = val;
      best.x = x;
      best.y = y;
    }
  }
  best.value = sectional(t, best.x, best.y);
  return best;
}

double berger_lemma_check(const CurvatureTensor& t, const Mat4& frame) {
  const CurvatureTensor r = rotate(t, frame);
  double dev = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const auto ij = dual_pair(i, j);
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          if (k == l) continue;
          const auto kl = dual_pair(k, l);
          dev = std::max(dev, std::abs(r(i, j, k, l) - r(ij[0], ij[1], kl[0], kl[1])));
        }
    }
  return dev;
}

std::vector<NamedResidual> variational_conditions(const CurvatureTensor& t, const BergerForm& bf) {
  static const std::array<std::array<int, 4>, 12> idx = {{{1, 3, 2, 3},
                                                          {1, 3, 1, 2},
                                                          {1, 3, 4, 3},
                                                          {1, 3, 1, 4},
                                                          {2, 1, 2, 4},
                                                          {2, 3, 2, 4},
                                                          {4, 1, 4, 2},
                                                          {4, 2, 4, 3},
                                                          {1, 2, 1, 4},
                                                          {2, 1, 2, 3},
                                                          {3, 4, 3, 2},
                                                          {4, 3, 4, 1}}};
  const CurvatureTensor r = rotate(t, bf.frame);
  std::vector<NamedResidual> out;
  for (const auto& c : idx) {
    std::string name = "R" + std::to_string(c[0]) + std::to_string(c[1]) + std::to_string(c[2]) + std::to_string(c[3]);
    out.push_back({name, r(c[0] - 1, c[1] - 1, c[2] - 1, c[3] - 1)});
  }
  return out;
}

BergerProperties berger_properties(const CurvatureTensor& t, const BergerForm& bf) {
  BergerProperties p;
  const CurvatureTensor r = rotate(t, bf.frame);
  const double lambda = scalar(t) / 4.0;
  p.trace_dev = std::abs(bf.a.sum() - lambda);
  const Vec4 e[4] = {Vec4::Unit(0), Vec4::Unit(1), Vec4::Unit(2), Vec4::Unit(3)};
  for (int k = 0; k < 3; ++k) {
    const auto pp = kPairBasis[k];
    const auto dp = kPairBasis[k + 3];
    p.sectional_dev = std::max(p.sectional_dev, std::abs(sectional(r, e[pp[0]], e[pp[1]]) - bf.a[k]));
    p.sectional_dev = std::max(p.sectional_dev, std::abs(sectional(r, e[dp[0]], e[dp[1]]) - bf.a[k]));
    p.b_dev = std::max(p.b_dev, std::abs(r(pp[0], pp[1], dp[0], dp[1]) - bf.b[k]));
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      p.inequality_excess = std::max(p.inequality_excess, std::abs(bf.b[j] - bf.b[i]) - (bf.a[j] - bf.a[i]));
      p.ordering_excess = std::max(p.ordering_excess, bf.a[i] - bf.a[j]);
    }
  p.inequality_excess = std::max(0.0, p.inequality_excess);
  return p;
}

}  // namespace fourcurv

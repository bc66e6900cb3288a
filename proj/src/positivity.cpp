#include "fourcurv/positivity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace fourcurv {

const char* to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

double k_sum(const Eigen::MatrixXd& m, int k) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidInput("k_sum needs a square matrix");
  if (k < 1 || k > m.rows()) throw BadK("k must lie in 1.." + std::to_string(m.rows()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().head(k).sum();
}

HalfMargins half_two_positive(const CurvatureTensor& t) {
  const DualityBlocks b = to_blocks(t);
  return {k_sum(b.m_plus, 2), k_sum(b.m_minus, 2)};
}

double isotropic_curvature(const CurvatureTensor& t, const Mat4& f, Side side) {
  const Tensor4& r = t.tensor();
  const Vec4 e1 = f.col(0), e2 = f.col(1), e3 = f.col(2), e4 = f.col(3);
  const double k = evaluate(r, e1, e3, e1, e3) + evaluate(r, e1, e4, e1, e4) + evaluate(r, e2, e3, e2, e3) +
                   evaluate(r, e2, e4, e2, e4);
  const double r1234 = evaluate(r, e1, e2, e3, e4);
  return side == Side::plus ? k - 2.0 * r1234 : k + 2.0 * r1234;
}

namespace {

Mat4 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat4 a;
  for (int n = 0; n < 16; ++n) a.data()[n] = nd(rng);
  Eigen::HouseholderQR<Mat4> qr(a);
  Mat4 q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

Mat4 plane_rotation(int i, int j, double th) {
  Mat4 g = Mat4::Identity();
  g(i, i) = g(j, j) = std::cos(th);
  g(i, j) = -std::sin(th);
  g(j, i) = std::sin(th);
  return g;
}

}  // namespace

double min_isotropic(const CurvatureTensor& t, Side side, const IsotropicBudget& budget) {
  std::mt19937_64 rng(budget.seed);
  const double scale = std::max(norm(t), 1e-300);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < budget.starts; ++s) {
    Mat4 f = s == 0 ? Mat4::Identity() : random_rotation(rng);
    double cur = isotropic_curvature(t, f, side);
    for (int sweep = 0; sweep < budget.max_sweeps; ++sweep) {
      const double start = cur;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          const double e0 = cur;
          const double ep = isotropic_curvature(t, f * plane_rotation(i, j, std::numbers::pi / 4), side);
          const double em = isotropic_curvature(t, f * plane_rotation(i, j, -std::numbers::pi / 4), side);
          const double c0 = 0.5 * (ep + em);
          const double c2 = 0.5 * (ep - em);
          const double c1 = e0 - c0;
          const double amp = std::hypot(c1, c2);
          if (c0 - amp < cur) {
            const double th = 0.5 * (std::atan2(c2, c1) + std::numbers::pi);
            f = f * plane_rotation(i, j, th);
            cur = isotropic_curvature(t, f, side);
          }
        }
      if (start - cur <= 1e-15 * scale) break;
    }
    best = std::min(best, cur);
  }
  return best;
}

double halfpic_on_spectrum(double r, const Vec3& s) { return r * s.squaredNorm() - 36.0 * s.prod(); }

double halfpic_functional(const CurvatureTensor& t, Side side) {
  const auto [wp, wm] = weyl_halves(t);
  const WeylHalf& w = side == Side::plus ? wp : wm;
  return scalar(t) * w.norm_sq - 36.0 * w.det;
}

namespace {

// The admissible region in coordinates (z, s): z in [0, R/6],
// x = -2z + 1.5 z s with s in [0, 1], y = -x - z.
Vec3 spectrum_at(double z, double s) {
  const double x = -2.0 * z + 1.5 * z * s;
  return Vec3(x, -x - z, z);
}

struct GridPoint {
  double z, s, f;
};

}  // namespace

OracleResult halfpic_min_oracle(double r, const OracleBudget& budget) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("oracle needs a finite scalar curvature R >= 0");
  OracleResult out;
  const double zmax = r / 6.0;
  const int n = std::max(budget.grid, 2);
  auto eval = [&](double z, double s) {
    ++out.evaluations;
    return halfpic_on_spectrum(r, spectrum_at(z, s));
  };

  std::vector<GridPoint> pts;
  pts.reserve(static_cast<size_t>(n) * n);
  double fmin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double z = zmax * a / (n - 1), s = double(b) / (n - 1);
      const double f = eval(z, s);
      pts.push_back({z, s, f});
      fmin = std::min(fmin, f);
    }

  // Group near-minimal grid points into clusters, then zoom on each.
  const double scale3 = std::max(r * r * r, 1e-300);
  const double sep = std::max(r / 60.0, 1e-12);
  std::vector<GridPoint> reps;
  for (const auto& p : pts) {
    if (p.f > fmin + 1e-9 * scale3) continue;
    bool joined = false;
    for (auto& q : reps)
      if ((spectrum_at(p.z, p.s) - spectrum_at(q.z, q.s)).norm() < sep) {
        if (p.f < q.f) q = p;
        joined = true;
        break;
      }
    if (!joined) reps.push_back(p);
  }

  out.min_value = std::numeric_limits<double>::infinity();
  std::vector<GridPoint> refined;
  for (GridPoint p : reps) {
    double dz = zmax / (n - 1), ds = 1.0 / (n - 1);
    for (int level = 0; level < budget.refinements; ++level) {
      const double z0 = std::max(0.0, p.z - 2 * dz), z1 = std::min(zmax, p.z + 2 * dz);
      const double s0 = std::max(0.0, p.s - 2 * ds), s1 = std::min(1.0, p.s + 2 * ds);
      const int m = std::max(budget.grid / 20, 4);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          const double z = z0 + (z1 - z0) * a / (m - 1), s = s0 + (s1 - s0) * b / (m - 1);
          const double f = eval(z, s);
          if (f < p.f) p = {z, s, f};
        }
      dz = (z1 - z0) / (m - 1);
      ds = (s1 - s0) / (m - 1);
    }
    refined.push_back(p);
    if (p.f < out.min_value) {
      out.min_value = p.f;
      out.argmin = spectrum_at(p.z, p.s);
    }
  }
  for (const auto& p : refined)
    if (p.f <= out.min_value + 1e-10 * scale3) out.argmin_clusters.push_back(spectrum_at(p.z, p.s));
  return out;
}

PositivityReport classify_point(const CurvatureTensor& t, const IsotropicBudget& budget) {
  PositivityReport rep;
  const DualityBlocks b = to_blocks(t);
  for (int k = 1; k <= 3; ++k) {
    rep.sums_k_plus.push_back(k_sum(b.m_plus, k));
    rep.sums_k_minus.push_back(k_sum(b.m_minus, k));
  }
  const Mat6 full = b.assembled();
  for (int k = 1; k <= 6; ++k) rep.sums_k_full.push_back(k_sum(full, k));
  rep.min_isotropic_plus = min_isotropic(t, Side::plus, budget);
  rep.min_isotropic_minus = min_isotropic(t, Side::minus, budget);
  rep.halfpic_plus = halfpic_functional(t, Side::plus);
  rep.halfpic_minus = halfpic_functional(t, Side::minus);

  const double tn = norm(t);
  const double r = b.scalar;
  const auto [wp, wm] = weyl_halves(t);
  const Vec3 kahler(-r / 12.0, -r / 12.0, r / 6.0);
  const bool positive_r = r > 1e-10 * tn;
  if (positive_r && (wp.eigenvalues - kahler).cwiseAbs().maxCoeff() <= 1e-8 * r) rep.classification.push_back("kahler_type_plus");
  if (positive_r && (wm.eigenvalues - kahler).cwiseAbs().maxCoeff() <= 1e-8 * r) rep.classification.push_back("kahler_type_minus");
  if (std::sqrt(wp.norm_sq) <= 1e-10 * tn) rep.classification.push_back("half_conformally_flat_plus");
  if (std::sqrt(wm.norm_sq) <= 1e-10 * tn) rep.classification.push_back("half_conformally_flat_minus");
  const double tol = 1e-10 * tn;
  if (rep.sums_k_plus[1] < -tol && rep.sums_k_minus[1] < -tol) rep.classification.push_back("indefinite");
  if (rep.classification.empty()) rep.classification.push_back("none");
  return rep;
}

}  // namespace fourcurv

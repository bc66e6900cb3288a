#include "fourcurv/verify.hpp"

#include <algorithm>
#include <cmath>

#include "fourcurv/duality.hpp"
#include "fourcurv/quadratic.hpp"

namespace fourcurv {

double IdentityResult::residual(const std::string& name) const {
  for (const auto& [n, v] : residuals)
    if (n == name) return v;
  throw InvalidInput("no residual named " + name);
}

double IdentityResult::value(const std::string& name) const {
  for (const auto& [n, v] : values)
    if (n == name) return v;
  throw InvalidInput("no value named " + name);
}

const ConvergenceRecord& ConvergenceStudy::record(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return r;
  throw InvalidInput("no record named " + name);
}

namespace {

// Layout of the sampled coordinate quantities.
constexpr int kRm = 0, kW = 256, kRic = 512, kScalar = 528, kLambda = 529, kWp = 530, kWm = 531, kWfull = 532,
              kSampleSize = 533;

Mat3 half_matrix(const Tensor4& w, bool plus) {
  static const Bivectors basis = duality_basis();
  const auto& b = plus ? basis.plus : basis.minus;
  Mat3 m;
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) m(a, c) = apply(w, b[a], b[c]);
  return 0.5 * (m + m.transpose());
}

// Average over the images under pair antisymmetry and pair exchange.
Tensor4 curvature_like(const Tensor4& t) {
  Tensor4 s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          s(i, j, k, l) = 0.125 * (t(i, j, k, l) - t(j, i, k, l) - t(i, j, l, k) + t(j, i, l, k) + t(k, l, i, j) -
                                   t(l, k, i, j) - t(k, l, j, i) + t(l, k, j, i));
  return s;
}

std::pair<Tensor4, Tensor4> project(const Tensor4& t) { return pm_project(curvature_like(t)); }

std::vector<double> sample(const Chart& chart, const QuasiEinsteinStructure* s, const Vec4& x) {
  const LocalGeometry geo = local_geometry(chart, x);
  std::vector<double> out(kSampleSize);
  std::copy(geo.riemann.data().begin(), geo.riemann.data().end(), out.begin() + kRm);
  std::copy(geo.weyl.data().begin(), geo.weyl.data().end(), out.begin() + kW);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out[kRic + 4 * a + b] = geo.ricci(a, b);
  out[kScalar] = geo.scalar;
  out[kLambda] = s ? structure_lambda(*s, geo) : geo.scalar / 4.0;
  const Tensor4 wf = to_frame(geo.weyl, geo.frame);
  out[kWp] = half_matrix(wf, true).squaredNorm();
  out[kWm] = half_matrix(wf, false).squaredNorm();
  out[kWfull] = inner_product(wf, wf);
  return out;
}

Partials slice(const Partials& p, int offset, int count) {
  Partials s;
  s.v.assign(p.v.begin() + offset, p.v.begin() + offset + count);
  s.d.assign(p.d.begin() + offset, p.d.begin() + offset + count);
  if (!p.dd.empty()) s.dd.assign(p.dd.begin() + offset, p.dd.begin() + offset + count);
  return s;
}

// Frame components of a flattened rank-r covariant tensor.
std::vector<double> frame_components(int rank, std::vector<double> v, const Mat4& e) {
  const int n = 1 << (2 * rank);
  for (int slot = 0; slot < rank; ++slot) {
    const int stride = 1 << (2 * (rank - 1 - slot));
    std::vector<double> w(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const int d = (i / stride) & 3;
      const int base = i - d * stride;
      double s = 0.0;
      for (int m = 0; m < 4; ++m) s += v[base + m * stride] * e(m, d);
      w[i] = s;
    }
    v.swap(w);
  }
  return v;
}

double max_abs(const Tensor4& t) { return t.max_abs(); }

// Everything the identities need at the centre, in the orthonormal frame.
struct Centre {
  LocalGeometry geo;
  Partials all;
  Tensor4 rm, w, lap_rm, lap_w;
  std::array<Tensor4, 4> grad_rm, grad_w;
  Mat4 ric;
  double scalar = 0.0;
  double lambda = 0.0;
  // structure data
  Vec4 df = Vec4::Zero();
  Mat4 hess = Mat4::Zero();
  Vec4 grad_lambda = Vec4::Zero();
  Mat4 hess_lambda = Mat4::Zero();
  std::vector<double> grad_ric;  // (p, i, k)
  Vec4 grad_scalar = Vec4::Zero();
  // scalar-route pieces
  double lap_wp = 0.0, lap_wm = 0.0, lap_w2 = 0.0;
  double drift_wp = 0.0, drift_wm = 0.0, drift_w2 = 0.0;  // <grad f, grad |W+-|^2>
};

Centre centre_data(const Chart& chart, const QuasiEinsteinStructure* s, const Vec4& x, const DiffConfig& cfg) {
  Centre c;
  c.geo = local_geometry(chart, x);
  const Mat4& e = c.geo.frame;
  c.all = differentiate([&](const Vec4& p) { return sample(chart, s, p); }, x, chart.domain(), cfg);

  const Partials prm = slice(c.all, kRm, 256), pw = slice(c.all, kW, 256);
  c.rm = to_frame(c.geo.riemann, e);
  c.w = to_frame(c.geo.weyl, e);
  c.lap_rm = unflatten(frame_components(4, laplacian(4, prm, c.geo), e).data());
  c.lap_w = unflatten(frame_components(4, laplacian(4, pw, c.geo), e).data());
  const std::vector<double> nrm = frame_components(5, nabla(4, prm, c.geo), e);
  const std::vector<double> nw = frame_components(5, nabla(4, pw, c.geo), e);
  for (int a = 0; a < 4; ++a) {
    c.grad_rm[a] = unflatten(nrm.data() + 256 * a);
    c.grad_w[a] = unflatten(nw.data() + 256 * a);
  }
  c.ric = to_frame(c.geo.ricci, e);
  c.scalar = c.geo.scalar;
  c.grad_ric = frame_components(3, nabla(2, slice(c.all, kRic, 16), c.geo), e);
  const Partials ps = slice(c.all, kScalar, 1), pl = slice(c.all, kLambda, 1);
  Vec4 gs, gl;
  for (int a = 0; a < 4; ++a) {
    gs[a] = ps.d[0][a];
    gl[a] = pl.d[0][a];
  }
  c.grad_scalar = to_frame(gs, e);
  c.grad_lambda = to_frame(gl, e);
  const std::vector<double> hl = nabla2(0, pl, c.geo);
  Mat4 h;
  for (int q = 0; q < 4; ++q)
    for (int p = 0; p < 4; ++p) h(q, p) = hl[4 * q + p];
  c.hess_lambda = to_frame(Mat4((0.5 * (h + h.transpose())).eval()), e);

  Vec4 fgrad = Vec4::Zero();
  if (s) {
    const ScalarJet f = scalar_jet(*s->f, c.geo);
    fgrad = f.grad;
    c.df = to_frame(f.grad, e);
    c.hess = to_frame(f.hess, e);
    c.lambda = c.all.v[kLambda];
  } else {
    c.lambda = c.scalar / 4.0;
  }
  auto scalar_route = [&](int k, double& lap, double& drift) {
    const Partials p = slice(c.all, k, 1);
    lap = laplacian(0, p, c.geo)[0];
    Vec4 d;
    for (int a = 0; a < 4; ++a) d[a] = p.d[0][a];
    drift = fgrad.dot(c.geo.ginv * d);
  };
  scalar_route(kWp, c.lap_wp, c.drift_wp);
  scalar_route(kWm, c.lap_wm, c.drift_wm);
  scalar_route(kWfull, c.lap_w2, c.drift_w2);
  return c;
}

void require_einstein(const Centre& c, bool force) {
  if (force) return;
  const Mat4 tl = c.ric - (c.scalar / 4.0) * Mat4::Identity();
  if (tl.cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, max_abs(c.rm)))
    throw NotEinsteinChart("chart is not Einstein at the requested point (traceless Ricci " +
                           std::to_string(tl.cwiseAbs().maxCoeff()) + ")");
}

void require_valid(const QuasiEinsteinStructure& s, const Vec4& x) {
  const StructurePoint p = structure_at(s, x);
  const double scale = std::max({1.0, p.ricci.cwiseAbs().maxCoeff(), p.hess.cwiseAbs().maxCoeff()});
  if (p.validity > 1e-8 * scale)
    throw InvalidStructure("structure equation fails at the requested point (traceless residual " +
                           std::to_string(p.validity) + ")");
}

Tensor4 directional(const std::array<Tensor4, 4>& grad, const Vec4& v) {
  Tensor4 t;
  for (int a = 0; a < 4; ++a) t += v[a] * grad[a];
  return t;
}

}  // namespace

IdentityResult verify_hamilton(const Chart& chart, const Vec4& x, const DiffConfig& cfg, bool force) {
  const Centre c = centre_data(chart, nullptr, x, cfg);
  require_einstein(c, force);
  const double lambda = c.scalar / 4.0;
  const Tensor4 r = c.lap_rm + 2.0 * q_tensor(c.rm) - 2.0 * lambda * c.rm;
  IdentityResult out;
  out.identity = "hamilton";
  out.x = x;
  out.residuals = {{"residual", r.max_abs()}};
  out.values = {{"lambda", lambda}, {"laplacian_max", c.lap_rm.max_abs()}, {"rm_max", c.rm.max_abs()}};
  out.scale = std::max(1.0, c.rm.max_abs());
  return out;
}

IdentityResult verify_weitzenbock_einstein(const Chart& chart, const Vec4& x, const DiffConfig& cfg, bool force) {
  const Centre c = centre_data(chart, nullptr, x, cfg);
  require_einstein(c, force);
  const double lambda = c.scalar / 4.0;
  IdentityResult out;
  out.identity = "weitzenbock-einstein";
  out.x = x;
  const auto [wp, wm] = project(c.w);
  const auto [lp, lm] = project(c.lap_w);
  for (int side = 0; side < 2; ++side) {
    const bool plus = side == 0;
    const Tensor4& wh = plus ? wp : wm;
    const Tensor4& lh = plus ? lp : lm;
    double grad_sq = 0.0;
    for (int a = 0; a < 4; ++a) {
      const auto [gp, gm] = project(c.grad_w[a]);
      grad_sq += plus ? inner_product(gp, gp) : inner_product(gm, gm);
    }
    const Mat3 m = half_matrix(c.w, plus);
    const double norm_sq = m.squaredNorm(), det = m.determinant();
    const double lhs = 2.0 * inner_product(lh, wh) + 2.0 * grad_sq;
    const double lhs_scalar = plus ? c.lap_wp : c.lap_wm;
    const double rhs = 2.0 * grad_sq + 4.0 * lambda * norm_sq - 36.0 * det;
    const std::string n = plus ? "plus" : "minus";
    out.residuals.emplace_back(n, std::abs(lhs - rhs));
    out.residuals.emplace_back(n + "_scalar_route", std::abs(lhs_scalar - rhs));
    out.values.emplace_back(n + "_lhs", lhs);
    out.values.emplace_back(n + "_lhs_scalar_route", lhs_scalar);
    out.values.emplace_back(n + "_rhs", rhs);
    out.values.emplace_back(n + "_grad_sq", grad_sq);
    out.values.emplace_back(n + "_norm_sq", norm_sq);
    out.values.emplace_back(n + "_det", det);
  }
  out.scale = std::max(1.0, c.w.max_abs() * std::max(1.0, c.w.max_abs()));
  return out;
}

IdentityResult verify_prop32(const QuasiEinsteinStructure& s, const Vec4& x, const DiffConfig& cfg) {
  require_valid(s, x);
  const Centre c = centre_data(*s.chart, &s, x, cfg);
  const double im = s.inv_m();
  const Mat4 id = Mat4::Identity();
  const Mat4 ric_l = c.ric - c.lambda * id;
  const Mat4 dfdf = c.df * c.df.transpose();
  const Tensor4 lhs = c.lap_rm - directional(c.grad_rm, c.df);

  const Tensor4 t_lambda = 2.0 * c.lambda * c.rm;
  const Tensor4 t_q = -2.0 * q_tensor(c.rm);
  const Tensor4 t_hess_lambda = kulkarni_nomizu(c.hess_lambda, id);
  const Tensor4 t_hess_f = im * kulkarni_nomizu(ric_l, c.hess);
  const Tensor4 t_dfdf = (im * im) * kulkarni_nomizu(ric_l, dfdf);
  const Tensor4 t_grad_lambda = im * kulkarni_nomizu(c.grad_lambda * c.df.transpose(), id);
  Tensor4 t_insert;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double v = 0.0;
          for (int p = 0; p < 4; ++p)
            v += c.rm(i, p, k, l) * c.df[j] * c.df[p] + c.rm(i, j, k, p) * c.df[l] * c.df[p] -
                 c.rm(j, p, k, l) * c.df[i] * c.df[p] - c.rm(i, j, l, p) * c.df[k] * c.df[p];
          t_insert(i, j, k, l) = im * v;
        }
  const Tensor4 rhs = t_lambda + t_q + t_hess_lambda + t_hess_f + t_dfdf + t_grad_lambda + t_insert;

  IdentityResult out;
  out.identity = "prop32";
  out.x = x;
  out.residuals = {{"printed", (lhs - rhs).max_abs()},
                   {"without_grad_lambda_term", (lhs - (rhs - t_grad_lambda)).max_abs()}};
  out.values = {{"lhs_max", lhs.max_abs()},
                {"lambda", c.lambda},
                {"grad_lambda_norm", c.grad_lambda.norm()},
                {"term_2lambda_rm", t_lambda.max_abs()},
                {"term_q", t_q.max_abs()},
                {"term_hess_lambda", t_hess_lambda.max_abs()},
                {"term_ric_hess_f", t_hess_f.max_abs()},
                {"term_ric_dfdf", t_dfdf.max_abs()},
                {"term_grad_lambda_grad_f", t_grad_lambda.max_abs()},
                {"term_insertion", t_insert.max_abs()}};
  out.scale = std::max(1.0, c.rm.max_abs());
  return out;
}

IdentityResult verify_lemma31(const QuasiEinsteinStructure& s, const Vec4& x, const DiffConfig& cfg) {
  require_valid(s, x);
  const Centre c = centre_data(*s.chart, &s, x, cfg);
  const double im = s.inv_m();
  const int n = 4;
  auto grad_ric = [&](int p, int i, int k) { return c.grad_ric[16 * p + 4 * i + k]; };
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };

  double first = 0.0;
  Vec4 rhs1_trace = Vec4::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double rhs = c.grad_lambda[i] * delta(j, k) - c.grad_lambda[j] * delta(i, k);
        for (int l = 0; l < 4; ++l) rhs -= c.rm(i, j, k, l) * c.df[l];
        rhs += im * (c.lambda * delta(i, k) * c.df[j] - c.lambda * delta(j, k) * c.df[i] + c.ric(j, k) * c.df[i] -
                     c.ric(i, k) * c.df[j]);
        const double lhs = grad_ric(i, j, k) - grad_ric(j, i, k);
        first = std::max(first, std::abs(lhs - rhs));
        if (j == k) rhs1_trace[i] += rhs;
      }
  const Vec4 ric_df = c.ric * c.df;
  const Vec4 common = 2.0 * ric_df - 2.0 * im * ric_df + 2.0 * im * (c.scalar - (n - 1) * c.lambda) * c.df;
  const Vec4 traced_printed = (n - 1) * c.grad_lambda + common;
  const Vec4 traced_corrected = 2.0 * (n - 1) * c.grad_lambda + common;

  IdentityResult out;
  out.identity = "lemma31";
  out.x = x;
  out.residuals = {{"first", first},
                   {"traced_printed", (c.grad_scalar - traced_printed).cwiseAbs().maxCoeff()},
                   {"traced_corrected", (c.grad_scalar - traced_corrected).cwiseAbs().maxCoeff()},
                   {"trace_consistency_printed", (rhs1_trace - 0.5 * traced_printed).cwiseAbs().maxCoeff()},
                   {"trace_consistency_corrected", (rhs1_trace - 0.5 * traced_corrected).cwiseAbs().maxCoeff()}};
  out.values = {{"grad_scalar_norm", c.grad_scalar.norm()},
                {"grad_lambda_norm", c.grad_lambda.norm()},
                {"trace_scale", std::max(1.0, rhs1_trace.cwiseAbs().maxCoeff())}};
  out.scale = std::max(1.0, c.rm.max_abs());
  return out;
}

IdentityResult verify_weitzenbock_gqe(const QuasiEinsteinStructure& s, const Vec4& x, const DiffConfig& cfg) {
  require_valid(s, x);
  const Centre c = centre_data(*s.chart, &s, x, cfg);
  const double im = s.inv_m();
  const Mat4 dfdf = c.df * c.df.transpose();
  const double df2 = c.df.squaredNorm();
  const Tensor4 drift_w = c.lap_w - directional(c.grad_w, c.df);
  const Tensor4 ric_ric = kulkarni_nomizu(c.ric, c.ric);
  const Tensor4 ric_hess = kulkarni_nomizu(c.ric, c.hess);
  const Tensor4 hess_hess = kulkarni_nomizu(c.hess, c.hess);
  const Tensor4 ric_dfdf = kulkarni_nomizu(c.ric, dfdf);

  IdentityResult out;
  out.identity = "weitzenbock-gqe";
  out.x = x;

  // Full Weyl tensor, intermediate formula.
  {
    double grad_sq = 0.0;
    for (int a = 0; a < 4; ++a) grad_sq += inner_product(c.grad_w[a], c.grad_w[a]);
    const double lhs = 2.0 * inner_product(drift_w, c.w) + 2.0 * grad_sq;
    const double w2 = inner_product(c.w, c.w);
    const double rhs = 2.0 * grad_sq + 4.0 * c.lambda * w2 - 4.0 * inner_product(c.w, q_tensor(c.w)) -
                       inner_product(ric_ric, c.w) + 8.0 * im * insertion_inner(c.w, c.w, c.df) +
                       2.0 * im * inner_product(ric_hess, c.w) + (2.0 * im * im + 2.0 * im) * inner_product(ric_dfdf, c.w);
    out.residuals.emplace_back("full_weyl", std::abs(lhs - rhs));
    out.residuals.emplace_back("full_weyl_scalar_route", std::abs(c.lap_w2 - c.drift_w2 - rhs));
    out.values.emplace_back("full_lhs", lhs);
    out.values.emplace_back("full_norm_sq", w2);
  }

  const auto [wp, wm] = project(c.w);
  const auto [dp, dm] = project(drift_w);
  for (int side = 0; side < 2; ++side) {
    const bool plus = side == 0;
    const std::string n = plus ? "plus" : "minus";
    const Tensor4& wh = plus ? wp : wm;
    const Tensor4& dh = plus ? dp : dm;
    double grad_sq = 0.0;
    for (int a = 0; a < 4; ++a) {
      const auto [gp, gm] = project(c.grad_w[a]);
      grad_sq += plus ? inner_product(gp, gp) : inner_product(gm, gm);
    }
    const Mat3 m = half_matrix(c.w, plus);
    const double w2 = m.squaredNorm(), det = m.determinant();
    const double rr = inner_product(ric_ric, wh), rh = inner_product(ric_hess, wh), hh = inner_product(hess_hess, wh),
                 rd = inner_product(ric_dfdf, wh);
    const double lhs = 2.0 * inner_product(dh, wh) + 2.0 * grad_sq;
    const double lhs_scalar = plus ? c.lap_wp - c.drift_wp : c.lap_wm - c.drift_wm;
    const double base = 2.0 * grad_sq + 4.0 * c.lambda * w2 - 36.0 * det;

    const double statement = base + 2.0 * im * df2 * w2 - (1.0 + 2.0 * im) * hh;
    const double intermediate = base - rr + 2.0 * im * rh + (2.0 * im + 2.0 * im * im) * rd + 2.0 * im * w2 * df2;
    const double final_form = base + (1.0 + 2.0 * im) * rr + (2.0 + 4.0 * im) * rh + 2.0 * im * w2 * df2;

    out.residuals.emplace_back("statement_" + n, std::abs(lhs - statement));
    out.residuals.emplace_back("statement_" + n + "_scalar_route", std::abs(lhs_scalar - statement));
    out.residuals.emplace_back("proof_intermediate_" + n, std::abs(lhs - intermediate));
    out.residuals.emplace_back("proof_final_" + n, std::abs(lhs - final_form));
    if (s.m == -2.0) out.residuals.emplace_back("m_minus2_" + n, std::abs(lhs - (base - df2 * w2)));
    if (std::isinf(s.m)) out.residuals.emplace_back("m_infinite_" + n, std::abs(lhs - (base - rr)));
    out.values.emplace_back(n + "_lhs", lhs);
    out.values.emplace_back(n + "_norm_sq", w2);
    out.values.emplace_back(n + "_det", det);
    out.values.emplace_back(n + "_grad_sq", grad_sq);
    out.values.emplace_back(n + "_ric_ric", rr);
    out.values.emplace_back(n + "_ric_hess", rh);
    out.values.emplace_back(n + "_hess_hess", hh);
  }
  out.values.emplace_back("lambda", c.lambda);
  out.values.emplace_back("grad_f_sq", df2);
  out.scale = std::max(1.0, c.w.max_abs() * std::max(1.0, c.w.max_abs()));
  return out;
}

WeylDerivatives cov_deriv_weyl(const Chart& chart, const Vec4& x, const DiffConfig& cfg) {
  const LocalGeometry geo = local_geometry(chart, x);
  const Partials pw = differentiate([&](const Vec4& p) { return flatten(local_geometry(chart, p).weyl); }, x,
                                    chart.domain(), cfg, false);
  const std::vector<double> nw = frame_components(5, nabla(4, pw, geo), geo.frame);
  WeylDerivatives d;
  d.weyl = to_frame(geo.weyl, geo.frame);
  d.div_plus.assign(64, 0.0);
  d.div_minus.assign(64, 0.0);
  for (int a = 0; a < 4; ++a) {
    d.nabla_weyl[a] = unflatten(nw.data() + 256 * a);
    const auto [gp, gm] = project(d.nabla_weyl[a]);
    d.grad_sq_plus += inner_product(gp, gp);
    d.grad_sq_minus += inner_product(gm, gm);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          d.div_plus[16 * j + 4 * k + l] += gp(a, j, k, l);
          d.div_minus[16 * j + 4 * k + l] += gm(a, j, k, l);
        }
  }
  for (int i = 0; i < 64; ++i) {
    d.div_sq_plus += 0.5 * d.div_plus[i] * d.div_plus[i];
    d.div_sq_minus += 0.5 * d.div_minus[i] * d.div_minus[i];
  }
  return d;
}

IdentityResult cgy_integrand(const Chart& chart, const Vec4& x, const DiffConfig& cfg) {
  const WeylDerivatives d = cov_deriv_weyl(chart, x, cfg);
  const LocalGeometry geo = local_geometry(chart, x);
  IdentityResult out;
  out.identity = "cgy";
  out.x = x;
  for (int side = 0; side < 2; ++side) {
    const bool plus = side == 0;
    const Mat3 m = half_matrix(d.weyl, plus);
    const double grad_sq = plus ? d.grad_sq_plus : d.grad_sq_minus;
    const double div_sq = plus ? d.div_sq_plus : d.div_sq_minus;
    const double zeroth = geo.scalar * m.squaredNorm() - 36.0 * m.determinant();
    const std::string n = plus ? "plus" : "minus";
    out.residuals.emplace_back(n, 2.0 * grad_sq - 8.0 * div_sq + zeroth);
    out.values.emplace_back(n + "_grad_sq", grad_sq);
    out.values.emplace_back(n + "_div_sq", div_sq);
    out.values.emplace_back(n + "_zeroth_order", zeroth);
  }
  out.scale = std::max(1.0, d.weyl.max_abs() * std::max(1.0, d.weyl.max_abs()));
  return out;
}

const char* to_string(Convergence c) {
  switch (c) {
    case Convergence::nominal: return "nominal";
    case Convergence::superconvergent: return "superconvergent";
    case Convergence::floor: return "floor";
    case Convergence::subnominal: return "subnominal";
    case Convergence::nonconvergent: return "nonconvergent";
  }
  return "?";
}

Convergence classify(const std::vector<double>& residuals, const std::vector<double>& floors, int order,
                     std::vector<double>* ratios, double* observed) {
  const double target = std::pow(2.0, order);
  const double band = order == 2 ? 0.25 : 0.40;
  std::vector<double> r;
  int above = 0;
  for (size_t i = 0; i < residuals.size(); ++i)
    if (residuals[i] > floors[i]) ++above;
  for (size_t i = 0; i + 1 < residuals.size(); ++i)
    r.push_back(residuals[i + 1] > 0.0 ? residuals[i] / residuals[i + 1] : INFINITY);
  if (ratios) *ratios = r;
  if (observed) *observed = r.empty() ? 0.0 : std::log2(r.back());
  if (above == 0) return Convergence::floor;
  // Ratios only mean something while both residuals sit above the roundoff floor.
  bool nominal = true, faster = true, stalled = false;
  int counted = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    if (residuals[i + 1] <= floors[i + 1]) continue;
    ++counted;
    if (std::abs(r[i] - target) > band * target) nominal = false;
    if (r[i] <= target * (1.0 + band)) faster = false;
    if (r[i] < 1.5) stalled = true;
  }
  if (counted == 0) return residuals.back() <= floors.back() ? Convergence::floor : Convergence::nonconvergent;
  if (stalled) return Convergence::nonconvergent;
  if (nominal) return Convergence::nominal;
  if (faster) return Convergence::superconvergent;
  return Convergence::subnominal;
}

ConvergenceStudy convergence_study(const PointVerifier& verifier, const Vec4& x, const DiffConfig& cfg, int levels) {
  check_config(cfg);
  if (levels < 2) throw InvalidInput("a convergence study needs at least two levels");
  ConvergenceStudy study;
  study.x = x;
  study.nominal_order = cfg.order + 2 * cfg.richardson;
  std::vector<IdentityResult> results;
  for (int l = 0; l < levels; ++l) {
    DiffConfig c = cfg;
    c.h = cfg.h / std::pow(2.0, l);
    results.push_back(verifier(x, c));
  }
  study.identity = results.front().identity;
  for (size_t k = 0; k < results.front().residuals.size(); ++k) {
    ConvergenceRecord rec;
    rec.name = results.front().residuals[k].first;
    for (int l = 0; l < levels; ++l) {
      const double h = cfg.h / std::pow(2.0, l);
      rec.steps.push_back(h);
      rec.residuals.push_back(results[l].residuals[k].second);
      // Roundoff in nested second differences grows like eps / h^2.
      rec.floors.push_back(kFloorFactor * results[l].scale / (h * h));
    }
    rec.status = classify(rec.residuals, rec.floors, study.nominal_order, &rec.ratios, &rec.observed_order);
    study.records.push_back(std::move(rec));
  }
  return study;
}

}  // namespace fourcurv

#include "fourcurv/calculus.hpp"

#include <cmath>
#include <map>

namespace fourcurv {

void check_config(const DiffConfig& cfg) {
  if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) throw InvalidInput("step h must be positive");
  if (cfg.order != 2 && cfg.order != 4) throw InvalidInput("order must be 2 or 4");
  if (cfg.richardson < 0 || cfg.richardson > 2) throw InvalidInput("richardson levels must be 0, 1 or 2");
}

LocalGeometry local_geometry(const Chart& chart, const Vec4& x) {
  LocalGeometry geo;
  geo.x = x;
  const MetricJet m = chart.metric_at(x);
  std::array<std::array<Mat4, 4>, 4> ddg;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      geo.g(a, b) = m[a][b].v;
      for (int c = 0; c < 4; ++c) {
        geo.dg[c](a, b) = m[a][b].g[c];
        for (int d = 0; d < 4; ++d) ddg[c][d](a, b) = m[a][b].h[c][d];
      }
    }
  if (!geo.g.allFinite()) throw SingularMetric("metric is not finite at the requested point");
  Eigen::LLT<Mat4> llt(geo.g);
  if (llt.info() != Eigen::Success) throw SingularMetric("metric is not positive definite at the requested point");
  geo.ginv = llt.solve(Mat4::Identity());

  // Christoffel symbols of the first kind and their derivatives.
  double first[4][4][4], dfirst[4][4][4][4];
  for (int d = 0; d < 4; ++d)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        first[d][b][c] = 0.5 * (geo.dg[b](d, c) + geo.dg[c](d, b) - geo.dg[d](b, c));
        for (int e = 0; e < 4; ++e)
          dfirst[e][d][b][c] = 0.5 * (ddg[e][b](d, c) + ddg[e][c](d, b) - ddg[e][d](b, c));
      }
  std::array<Mat4, 4> dginv;
  for (int e = 0; e < 4; ++e) dginv[e] = -geo.ginv * geo.dg[e] * geo.ginv;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        double s = 0.0;
        for (int d = 0; d < 4; ++d) s += geo.ginv(a, d) * first[d][b][c];
        geo.gamma[a](b, c) = s;
        for (int e = 0; e < 4; ++e) {
          double t = 0.0;
          for (int d = 0; d < 4; ++d) t += dginv[e](a, d) * first[d][b][c] + geo.ginv(a, d) * dfirst[e][d][b][c];
          geo.dgamma[e][a](b, c) = t;
        }
      }

  // R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb, lowered on the first slot.
  Tensor4 up;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double s = geo.dgamma[c][a](d, b) - geo.dgamma[d][a](c, b);
          for (int e = 0; e < 4; ++e) s += geo.gamma[a](c, e) * geo.gamma[e](d, b) - geo.gamma[a](d, e) * geo.gamma[e](c, b);
          up(a, b, c, d) = s;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double s = 0.0;
          for (int e = 0; e < 4; ++e) s += geo.g(a, e) * up(e, b, c, d);
          geo.riemann(a, b, c, d) = s;
        }

  geo.ricci.setZero();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      double s = 0.0;
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) s += geo.ginv(j, l) * geo.riemann(i, j, k, l);
      geo.ricci(i, k) = s;
    }
  geo.ricci = (0.5 * (geo.ricci + geo.ricci.transpose())).eval();
  geo.scalar = (geo.ginv.cwiseProduct(geo.ricci)).sum();
  geo.weyl = geo.riemann + (geo.scalar / 12.0) * kulkarni_nomizu(geo.g, geo.g) - 0.5 * kulkarni_nomizu(geo.ricci, geo.g);

  // Gram-Schmidt in the metric g.
  geo.frame.setZero();
  for (int a = 0; a < 4; ++a) {
    Vec4 v = Vec4::Unit(a);
    for (int b = 0; b < a; ++b) v -= (geo.frame.col(b).dot(geo.g * v)) * geo.frame.col(b);
    v /= std::sqrt(v.dot(geo.g * v));
    geo.frame.col(a) = v;
  }
  return geo;
}

Tensor4 to_frame(const Tensor4& t, const Mat4& e) {
  Tensor4 a, b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += t(i, j, k, m) * e(m, l);
          a(i, j, k, l) = s;
        }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += a(i, j, m, l) * e(m, k);
          b(i, j, k, l) = s;
        }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += b(i, m, k, l) * e(m, j);
          a(i, j, k, l) = s;
        }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += a(m, j, k, l) * e(m, i);
          b(i, j, k, l) = s;
        }
  return b;
}

Mat4 to_frame(const Mat4& t, const Mat4& e) { return e.transpose() * t * e; }
Vec4 to_frame(const Vec4& v, const Mat4& e) { return e.transpose() * v; }

ScalarJet scalar_jet(const ScalarField& f, const LocalGeometry& geo) {
  const Jet2 j = f.eval(seed(geo.x));
  ScalarJet s;
  s.value = j.v;
  for (int a = 0; a < 4; ++a) s.grad[a] = j.g[a];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double v = j.h[a][b];
      for (int m = 0; m < 4; ++m) v -= geo.gamma[m](a, b) * s.grad[m];
      s.hess(a, b) = v;
    }
  s.hess = (0.5 * (s.hess + s.hess.transpose())).eval();
  return s;
}

namespace {

struct Stencil {
  std::vector<std::pair<int, double>> first, second;  // offset, weight (before 1/h or 1/h^2)
};

const Stencil& stencil(int order) {
  static const Stencil s2{{{-1, -0.5}, {1, 0.5}}, {{-1, 1.0}, {0, -2.0}, {1, 1.0}}};
  static const Stencil s4{{{-2, 1.0 / 12}, {-1, -8.0 / 12}, {1, 8.0 / 12}, {2, -1.0 / 12}},
                          {{-2, -1.0 / 12}, {-1, 16.0 / 12}, {0, -30.0 / 12}, {1, 16.0 / 12}, {2, -1.0 / 12}}};
  return order == 2 ? s2 : s4;
}

struct Estimate {
  std::vector<std::array<double, 4>> d;
  std::vector<std::array<double, 16>> dd;
};

Estimate estimate(const SampleFn& f, const Vec4& x, const Box& domain, double h, int order, bool second,
                  const std::vector<double>& centre) {
  const Stencil& st = stencil(order);
  std::map<std::array<int, 4>, std::vector<double>> cache;
  auto at = [&](const std::array<int, 4>& off) -> const std::vector<double>& {
    auto it = cache.find(off);
    if (it != cache.end()) return it->second;
    if (off == std::array<int, 4>{0, 0, 0, 0}) return cache.emplace(off, centre).first->second;
    Vec4 p = x;
    for (int a = 0; a < 4; ++a) p[a] += off[a] * h;
    if (!domain.contains(p))
      throw StencilOutOfDomain("stencil point leaves the chart domain (reduce h or move the point inward)");
    return cache.emplace(off, f(p)).first->second;
  };
  const size_t n = centre.size();
  Estimate e;
  e.d.assign(n, {});
  if (second) e.dd.assign(n, {});
  for (int a = 0; a < 4; ++a) {
    for (const auto& [o, w] : st.first) {
      std::array<int, 4> off{};
      off[a] = o;
      const auto& v = at(off);
      for (size_t k = 0; k < n; ++k) e.d[k][a] += w * v[k] / h;
    }
  }
  if (!second) return e;
  for (int a = 0; a < 4; ++a) {
    for (const auto& [o, w] : st.second) {
      std::array<int, 4> off{};
      off[a] = o;
      const auto& v = at(off);
      for (size_t k = 0; k < n; ++k) e.dd[k][4 * a + a] += w * v[k] / (h * h);
    }
    for (int b = a + 1; b < 4; ++b) {
      for (const auto& [oa, wa] : st.first)
        for (const auto& [ob, wb] : st.first) {
          std::array<int, 4> off{};
          off[a] = oa;
          off[b] = ob;
          const auto& v = at(off);
          for (size_t k = 0; k < n; ++k) e.dd[k][4 * a + b] += wa * wb * v[k] / (h * h);
        }
      for (size_t k = 0; k < n; ++k) e.dd[k][4 * b + a] = e.dd[k][4 * a + b];
    }
  }
  return e;
}

}  // namespace

Partials differentiate(const SampleFn& f, const Vec4& x, const Box& domain, const DiffConfig& cfg, bool second) {
  check_config(cfg);
  Partials p;
  p.v = f(x);
  std::vector<Estimate> levels;
  for (int l = 0; l <= cfg.richardson; ++l)
    levels.push_back(estimate(f, x, domain, cfg.h / std::pow(2.0, l), cfg.order, second, p.v));
  // Central differences expand in even powers: h^p, h^(p+2), ...
  for (int k = 1; k <= cfg.richardson; ++k) {
    const double c = std::pow(2.0, cfg.order + 2 * (k - 1));
    for (size_t j = 0; j + 1 < levels.size(); ++j) {
      Estimate& lo = levels[j];
      const Estimate& hi = levels[j + 1];
      for (size_t n = 0; n < lo.d.size(); ++n) {
        for (int a = 0; a < 4; ++a) lo.d[n][a] = (c * hi.d[n][a] - lo.d[n][a]) / (c - 1.0);
        if (second)
          for (int a = 0; a < 16; ++a) lo.dd[n][a] = (c * hi.dd[n][a] - lo.dd[n][a]) / (c - 1.0);
      }
    }
    levels.pop_back();
  }
  p.d = std::move(levels.front().d);
  p.dd = std::move(levels.front().dd);
  return p;
}

namespace {

int power4(int r) { return 1 << (2 * r); }

int digit(int index, int slot, int rank) { return (index >> (2 * (rank - 1 - slot))) & 3; }

int replace_digit(int index, int slot, int rank, int m) {
  const int shift = 2 * (rank - 1 - slot);
  return (index & ~(3 << shift)) | (m << shift);
}

}  // namespace

std::vector<double> nabla(int rank, const Partials& t, const LocalGeometry& geo) {
  const int n = power4(rank);
  std::vector<double> out(4 * n);
  for (int p = 0; p < 4; ++p)
    for (int i = 0; i < n; ++i) {
      double s = t.d[i][p];
      for (int slot = 0; slot < rank; ++slot) {
        const int is = digit(i, slot, rank);
        for (int m = 0; m < 4; ++m) s -= geo.gamma[m](p, is) * t.v[replace_digit(i, slot, rank, m)];
      }
      out[p * n + i] = s;
    }
  return out;
}

std::vector<double> nabla2(int rank, const Partials& t, const LocalGeometry& geo) {
  const int n = power4(rank);
  const std::vector<double> first = nabla(rank, t, geo);  // (p, I)
  std::vector<double> out(16 * n);
  for (int q = 0; q < 4; ++q)
    for (int p = 0; p < 4; ++p)
      for (int i = 0; i < n; ++i) {
        // d_q of (nabla_p T)_I
        double s = t.dd[i][4 * q + p];
        for (int slot = 0; slot < rank; ++slot) {
          const int is = digit(i, slot, rank);
          for (int m = 0; m < 4; ++m) {
            const int j = replace_digit(i, slot, rank, m);
            s -= geo.dgamma[q][m](p, is) * t.v[j] + geo.gamma[m](p, is) * t.d[j][q];
          }
        }
        for (int m = 0; m < 4; ++m) s -= geo.gamma[m](q, p) * first[m * n + i];
        for (int slot = 0; slot < rank; ++slot) {
          const int is = digit(i, slot, rank);
          for (int m = 0; m < 4; ++m) s -= geo.gamma[m](q, is) * first[p * n + replace_digit(i, slot, rank, m)];
        }
        out[(q * 4 + p) * n + i] = s;
      }
  return out;
}

std::vector<double> laplacian(int rank, const Partials& t, const LocalGeometry& geo) {
  const int n = power4(rank);
  const std::vector<double> h = nabla2(rank, t, geo);
  std::vector<double> out(n, 0.0);
  for (int q = 0; q < 4; ++q)
    for (int p = 0; p < 4; ++p) {
      const double w = geo.ginv(p, q);
      for (int i = 0; i < n; ++i) out[i] += w * h[(q * 4 + p) * n + i];
    }
  return out;
}

std::vector<double> flatten(const Tensor4& t) { return {t.data().begin(), t.data().end()}; }

Tensor4 unflatten(const double* data) {
  Tensor4 t;
  std::copy(data, data + 256, t.data().begin());
  return t;
}

std::vector<double> flatten(const Mat4& m) {
  std::vector<double> v(16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) v[4 * a + b] = m(a, b);
  return v;
}

}  // namespace fourcurv

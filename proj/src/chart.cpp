#include "fourcurv/chart.hpp"

#include <cmath>

namespace fourcurv {

JetVec seed(const Vec4& x) {
  JetVec j;
  for (int i = 0; i < 4; ++i) j[i] = Jet2::variable(x[i], i);
  return j;
}

MetricJet Chart::metric_at(const Vec4& x) const { return metric(seed(x)); }

Mat4 Chart::metric_value(const Vec4& x) const {
  JetVec j;
  for (int i = 0; i < 4; ++i) j[i] = Jet2(x[i]);
  const MetricJet m = metric(j);
  Mat4 g;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) g(a, b) = m[a][b].v;
  return g;
}

namespace {

class ConstantField : public ScalarField {
public:
  explicit ConstantField(double c) : c_(c) {}
  Jet2 eval(const JetVec&) const override { return Jet2(c_); }
  std::string describe() const override { return std::to_string(c_); }

private:
  double c_;
};

class ExpressionField : public ScalarField {
public:
  explicit ExpressionField(Expr e) : e_(std::move(e)) {}
  Jet2 eval(const JetVec& x) const override { return e_.eval(x); }
  std::string describe() const override { return e_.text(); }

private:
  Expr e_;
};

class FunctionField : public ScalarField {
public:
  FunctionField(std::function<Jet2(const JetVec&)> f, std::string d) : f_(std::move(f)), d_(std::move(d)) {}
  Jet2 eval(const JetVec& x) const override { return f_(x); }
  std::string describe() const override { return d_; }

private:
  std::function<Jet2(const JetVec&)> f_;
  std::string d_;
};

MetricJet diagonal(const Jet2& s) {
  MetricJet m;
  for (int a = 0; a < 4; ++a) m[a][a] = s;
  return m;
}

Jet2 radius_sq(const Jet2& a, const Jet2& b) { return a * a + b * b; }

Jet2 radius_sq(const JetVec& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]; }

class FlatChart : public Chart {
public:
  std::string name() const override { return "flat"; }
  Box domain() const override { return {Vec4::Constant(-10), Vec4::Constant(10)}; }
  MetricJet metric(const JetVec&) const override { return diagonal(Jet2(1.0)); }
};

class SphereChart : public Chart {
public:
  explicit SphereChart(double r) : r_(r) {}
  std::string name() const override { return "s4"; }
  Box domain() const override { return {Vec4::Constant(-3), Vec4::Constant(3)}; }
  MetricJet metric(const JetVec& x) const override {
    const Jet2 d = Jet2(1.0) + radius_sq(x);
    return diagonal(Jet2(4.0 * r_ * r_) / (d * d));
  }

private:
  double r_;
};

class HyperbolicChart : public Chart {
public:
  explicit HyperbolicChart(double r) : r_(r) {}
  std::string name() const override { return "h4"; }
  Box domain() const override { return {Vec4::Constant(-0.45), Vec4::Constant(0.45)}; }
  MetricJet metric(const JetVec& x) const override {
    const Jet2 d = Jet2(1.0) - radius_sq(x);
    return diagonal(Jet2(4.0 * r_ * r_) / (d * d));
  }

private:
  double r_;
};

class FubiniStudyChart : public Chart {
public:
  std::string name() const override { return "fs"; }
  Box domain() const override { return {Vec4::Constant(-3), Vec4::Constant(3)}; }
  MetricJet metric(const JetVec& x) const override {
    const JetVec jx = {-x[1], x[0], -x[3], x[2]};
    const Jet2 s = Jet2(1.0) + radius_sq(x);
    const Jet2 inv = reciprocal(s * s);
    MetricJet m;
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) {
        Jet2 v = -(x[a] * x[b]) - jx[a] * jx[b];
        if (a == b) v += s;
        m[a][b] = v * inv;
        m[b][a] = m[a][b];
      }
    return m;
  }
};

class SphereProductChart : public Chart {
public:
  SphereProductChart(double a, double b, bool flat_second) : a_(a), b_(b), flat_(flat_second) {}
  std::string name() const override { return flat_ ? "cylinder" : "s2xs2"; }
  Box domain() const override { return {Vec4::Constant(-3), Vec4::Constant(3)}; }
  MetricJet metric(const JetVec& x) const override {
    MetricJet m;
    const Jet2 du = Jet2(1.0) + radius_sq(x[0], x[1]);
    m[0][0] = m[1][1] = Jet2(4.0 * a_ * a_) / (du * du);
    if (flat_) {
      m[2][2] = m[3][3] = Jet2(1.0);
    } else {
      const Jet2 dv = Jet2(1.0) + radius_sq(x[2], x[3]);
      m[2][2] = m[3][3] = Jet2(4.0 * b_ * b_) / (dv * dv);
    }
    return m;
  }

private:
  double a_, b_;
  bool flat_;
};

class SdsChart : public Chart {
public:
  SdsChart(double mass, double lambda) : m_(mass), l_(lambda) {}
  std::string name() const override { return "sds"; }
  Box domain() const override { return {Vec4(-5, 0.45, 0.4, -5), Vec4(5, 1.6, 2.7, 5)}; }
  MetricJet metric(const JetVec& x) const override {
    const Jet2& r = x[1];
    const Jet2 v = Jet2(1.0) - Jet2(2.0 * m_) / r - (l_ / 3.0) * (r * r);
    MetricJet m;
    m[0][0] = v;
    m[1][1] = reciprocal(v);
    m[2][2] = r * r;
    const Jet2 s = sin(x[2]);
    m[3][3] = r * r * s * s;
    return m;
  }

private:
  double m_, l_;
};

class ConformalChart : public Chart {
public:
  ConformalChart(ChartPtr base, ScalarFieldPtr f, Box box) : base_(std::move(base)), f_(std::move(f)), box_(box) {}
  std::string name() const override { return "conformal(" + base_->name() + ", " + f_->describe() + ")"; }
  Box domain() const override { return box_; }
  MetricJet metric(const JetVec& x) const override {
    MetricJet m = base_->metric(x);
    const Jet2 w = exp(f_->eval(x));
    for (auto& row : m)
      for (auto& c : row) c = w * c;
    return m;
  }

private:
  ChartPtr base_;
  ScalarFieldPtr f_;
  Box box_;
};

class LinearChart : public Chart {
public:
  LinearChart(ChartPtr base, const Mat4& a, const Vec4& shift) : base_(std::move(base)), a_(a), shift_(shift) {
    // Largest box whose image stays in the base domain, found by shrinking.
    const Mat4 ainv = a_.inverse();
    const Box b = base_->domain();
    const Vec4 centre = 0.5 * (b.lo + b.hi);
    const Vec4 yc = ainv * (centre - shift_);
    double s = 10.0;
    for (int it = 0; it < 200; ++it) {
      bool ok = true;
      for (int corner = 0; corner < 16 && ok; ++corner) {
        Vec4 y = yc;
        for (int i = 0; i < 4; ++i) y[i] += (corner >> i & 1) ? s : -s;
        const Vec4 x = a_ * y + shift_;
        ok = ((x.array() > b.lo.array()) && (x.array() < b.hi.array())).all();
      }
      if (ok) break;
      s *= 0.95;
    }
    box_ = {yc.array() - s, yc.array() + s};
  }
  std::string name() const override { return "linear(" + base_->name() + ")"; }
  Box domain() const override { return box_; }
  MetricJet metric(const JetVec& y) const override {
    JetVec x;
    for (int i = 0; i < 4; ++i) {
      x[i] = Jet2(shift_[i]);
      for (int j = 0; j < 4; ++j)
        if (a_(i, j) != 0.0) x[i] += a_(i, j) * y[j];
    }
    const MetricJet g = base_->metric(x);
    MetricJet out;
    for (int p = 0; p < 4; ++p)
      for (int q = p; q < 4; ++q) {
        Jet2 s;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            const double w = a_(i, p) * a_(j, q);
            if (w != 0.0) {
              Jet2 t = g[i][j];
              s += t *= w;
            }
          }
        out[p][q] = s;
        out[q][p] = s;
      }
    return out;
  }

private:
  ChartPtr base_;
  Mat4 a_;
  Vec4 shift_;
  Box box_;
};

}  // namespace

ScalarFieldPtr constant_field(double c) { return std::make_shared<ConstantField>(c); }
ScalarFieldPtr expression_field(const std::string& text) { return std::make_shared<ExpressionField>(Expr::parse(text)); }
ScalarFieldPtr function_field(std::function<Jet2(const JetVec&)> f, std::string d) {
  return std::make_shared<FunctionField>(std::move(f), std::move(d));
}

ChartPtr flat_chart() { return std::make_shared<FlatChart>(); }
ChartPtr sphere_chart(double r) { return std::make_shared<SphereChart>(r); }
ChartPtr hyperbolic_chart(double r) { return std::make_shared<HyperbolicChart>(r); }
ChartPtr fubini_study_chart() { return std::make_shared<FubiniStudyChart>(); }
ChartPtr sphere_product_chart(double a, double b) { return std::make_shared<SphereProductChart>(a, b, false); }
ChartPtr cylinder_chart(double a) { return std::make_shared<SphereProductChart>(a, 1.0, true); }
ChartPtr schwarzschild_de_sitter_chart(double mass, double lambda) { return std::make_shared<SdsChart>(mass, lambda); }
ChartPtr conformal_chart(ChartPtr base, ScalarFieldPtr f, Box domain) {
  return std::make_shared<ConformalChart>(std::move(base), std::move(f), domain);
}
ChartPtr conformal_chart(ChartPtr base, ScalarFieldPtr f) {
  const Box b = base->domain();
  return conformal_chart(std::move(base), std::move(f), b);
}
ChartPtr linear_chart(ChartPtr base, const Mat4& a, const Vec4& shift) {
  if (!(a.determinant() > 0.0)) throw InvalidInput("linear change of coordinates needs det A > 0");
  return std::make_shared<LinearChart>(std::move(base), a, shift);
}

}  // namespace fourcurv

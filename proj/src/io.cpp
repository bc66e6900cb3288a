#include "fourcurv/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "fourcurv/models.hpp"
#include "fourcurv/quadratic.hpp"

namespace fourcurv {

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("field '") + key + "': " + e.what());
  }
}

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  return j.at(key);
}

Vec3 vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InvalidInput("expected an array of three numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) v[i] = j[i].get<double>();
  return v;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

json load_json_arg(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    try {
      return json::parse(arg);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("inline JSON: ") + e.what());
    }
  }
  std::ifstream in(arg);
  if (in) {
    try {
      return json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParseError(arg + ": " + e.what());
    }
  }
  return json(arg);  // shorthand name
}

CurvatureTensor tensor_from_json(const json& j) {
  if (j.is_string()) return model_tensor({j.get<std::string>(), {}});
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "components") {
    const json& e = need(j, "entries");
    if (!e.is_array()) throw InvalidInput("'entries' must be an array");
    std::vector<ComponentEntry> entries;
    for (const auto& row : e) {
      if (!row.is_array() || row.size() != 5) throw InvalidInput("each entry must be [i, j, k, l, value]");
      int idx[4];
      for (int a = 0; a < 4; ++a) {
        if (!row[a].is_number_integer()) throw InvalidInput("indices must be integers 1..4");
        idx[a] = row[a].get<int>() - 1;
      }
      if (!row[4].is_number()) throw InvalidInput("component value must be a number");
      entries.push_back({idx[0], idx[1], idx[2], idx[3], row[4].get<double>()});
    }
    return CurvatureTensor::validate(fill_by_symmetry(entries), get_or(j, "tolerance", kSymmetryTol));
  }
  if (kind == "model") {
    ModelSpec spec{need(j, "name").get<std::string>(), {}};
    if (j.contains("params"))
      for (const auto& [k, v] : j.at("params").items()) spec.params[k] = v.get<double>();
    return model_tensor(spec);
  }
  if (kind == "synth_einstein")
    return synth_einstein(vec3(need(j, "w_plus")), vec3(need(j, "w_minus")), need(j, "R").get<double>());
  throw InvalidInput("unknown tensor kind '" + kind + "'");
}

json tensor_to_json(const Tensor4& t) {
  json entries = json::array();
  for (int p = 0; p < 6; ++p)
    for (int q = p; q < 6; ++q) {
      const auto [i, j] = kPairBasis[p];
      const auto [k, l] = kPairBasis[q];
      const double v = t(i, j, k, l);
      if (v != 0.0) entries.push_back({i + 1, j + 1, k + 1, l + 1, v});
    }
  return {{"kind", "components"}, {"entries", entries}};
}

ChartPtr chart_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = lower(j.get<std::string>());
    if (s == "flat" || s == "r4") return flat_chart();
    if (s == "s4") return sphere_chart();
    if (s == "h4") return hyperbolic_chart();
    if (s == "fs" || s == "cp2") return fubini_study_chart();
    if (s == "s2xs2") return sphere_product_chart(1.0, 1.0);
    if (s == "cylinder") return cylinder_chart(1.0);
    if (s == "sds") return schwarzschild_de_sitter_chart();
    if (s == "fs-bump") return conformal_chart(fubini_study_chart(), expression_field(kBumpPotential));
    throw InvalidInput("unknown chart shorthand '" + j.get<std::string>() + "'");
  }
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "model") {
    const std::string name = need(j, "name").get<std::string>();
    const json params = j.value("params", json::object());
    auto p = [&](const char* k, double d) { return params.value(k, d); };
    if (name == "S4") return sphere_chart(p("r", 1.0));
    if (name == "H4") return hyperbolic_chart(p("r", 1.0));
    if (name == "R4") return flat_chart();
    if (name == "CP2") return fubini_study_chart();
    if (name == "S2xS2") return sphere_product_chart(p("r", 1.0), p("r", 1.0));
    if (name == "S2axS2b") return sphere_product_chart(p("a", 1.0), p("b", 1.0));
    if (name == "S2xR2") return cylinder_chart(p("a", 1.0));
    throw BadSpec("no chart for model '" + name + "'");
  }
  if (kind == "conformal_flat") return conformal_chart(flat_chart(), expression_field(need(j, "f").get<std::string>()));
  if (kind == "conformal")
    return conformal_chart(chart_from_json(need(j, "base")), expression_field(need(j, "f").get<std::string>()));
  if (kind == "sds") return schwarzschild_de_sitter_chart(get_or(j, "mass", 0.1), get_or(j, "lambda", 0.3));
  if (kind == "linear") {
    const json& m = need(j, "matrix");
    Mat4 a;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) a(r, c) = m.at(r).at(c).get<double>();
    return linear_chart(chart_from_json(need(j, "base")), a);
  }
  throw InvalidInput("unknown chart kind '" + kind + "'");
}

QuasiEinsteinStructure structure_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = lower(j.get<std::string>());
    if (s == "gaussian") return gaussian_soliton(1.0);
    if (s == "bump") return conformal_to_einstein(flat_chart(), expression_field(kBumpPotential), "bump");
    if (s == "linear") return conformal_to_einstein(flat_chart(), expression_field("0.1*x1"), "linear");
    if (s == "fs-bump") return conformal_to_einstein(fubini_study_chart(), expression_field(kBumpPotential), "fs-bump");
    if (s == "s4-bump") return conformal_to_einstein(sphere_chart(), expression_field(kBumpPotential), "s4-bump");
    if (s == "cylinder") return cylinder_soliton(1.0);
    // any chart shorthand: Einstein chart with constant potential
    return einstein_structure(chart_from_json(j));
  }
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "gaussian_soliton") return gaussian_soliton(get_or(j, "lambda", 1.0));
  if (kind == "conformal_to_einstein")
    return conformal_to_einstein(chart_from_json(need(j, "base")), expression_field(need(j, "f").get<std::string>()),
                                 get_or<std::string>(j, "name", "conformal"));
  if (kind == "cylinder_soliton") return cylinder_soliton(get_or(j, "a", 1.0));
  if (kind == "einstein") {
    double m = kInfiniteM;
    if (j.contains("m") && !j.at("m").is_null()) {
      if (j.at("m").is_string()) {
        if (lower(j.at("m").get<std::string>()) != "inf") throw InvalidInput("m must be a number or \"inf\"");
      } else {
        m = j.at("m").get<double>();
      }
    }
    if (m == 0.0) throw InvalidInput("m must be nonzero");
    return einstein_structure(chart_from_json(need(j, "chart")), m);
  }
  throw InvalidInput("unknown structure kind '" + kind + "'");
}

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
  return a;
}

json decompose_report(const CurvatureTensor& t) {
  const CurvDecomposition d = standard_decompose(t);
  const DualityBlocks b = to_blocks(t);
  const auto [wp, wm] = weyl_halves(t);
  auto half = [](const WeylHalf& w) {
    return json{{"eigs", vec_json(w.eigenvalues)}, {"det", w.det}, {"norm_sq", w.norm_sq}, {"matrix", mat_json(w.matrix)}};
  };
  return {{"R", d.scalar},
          {"Wplus", half(wp)},
          {"Wminus", half(wm)},
          {"cross_norm", b.m_cross.norm()},
          {"ricci", mat_json(ricci(t))},
          {"traceless_ricci", mat_json(d.traceless_ricci)},
          {"weyl_norm", norm(d.weyl)},
          {"norm", norm(t)},
          {"operator_eigs", vec_json(Eigen::SelfAdjointEigenSolver<Mat6>(b.assembled()).eigenvalues())}};
}

json berger_report(const CurvatureTensor& t) {
  const BergerForm bf = berger_form(t);
  const BergerProperties p = berger_properties(t, bf);
  json vanishing = json::object();
  for (const auto& r : variational_conditions(t, bf)) vanishing[r.name] = r.value;
  const ExtremalPlane ep = extremal_plane(t);
  return {{"a", vec_json(bf.a)},
          {"b", vec_json(bf.b)},
          {"frame", mat_json(bf.frame)},
          {"residual", bf.residual},
          {"used_fallback", bf.used_fallback},
          {"properties",
           {{"trace_dev", p.trace_dev},
            {"sectional_dev", p.sectional_dev},
            {"b_dev", p.b_dev},
            {"inequality_excess", p.inequality_excess},
            {"ordering_excess", p.ordering_excess}}},
          {"min_sectional", ep.value},
          {"vanishing_components", vanishing}};
}

json quadratic_report(const CurvatureTensor& t) {
  json r = {{"B", tensor_to_json(b_tensor(t))},
            {"Q", tensor_to_json(q_tensor(t))},
            {"cm_expansion_deviation", cm_expansion_check(t)},
            {"q_table", nullptr},
            {"pairing_plus", nullptr},
            {"pairing_minus", nullptr}};
  try {
    const QPairing qp = q_weyl_pairing(t);
    r["pairing_plus"] = qp.direct_plus;
    r["pairing_minus"] = qp.direct_minus;
    r["nine_det_plus"] = qp.det_plus;
    r["nine_det_minus"] = qp.det_minus;
    const BergerForm bf = berger_form(t);
    json rows = json::array();
    for (const auto& row : q_table(t, bf)) {
      std::string label = "Q";
      for (int i : row.index) label += std::to_string(i);
      rows.push_back({{"component", label}, {"predicted", row.predicted}, {"actual", row.actual}});
    }
    r["q_table"] = rows;
    r["q_table_deviation"] = q_table_check(t, bf);
  } catch (const NotEinstein&) {
    // table and pairing are only defined for Einstein-type tensors
  }
  return r;
}

json positivity_report(const PositivityReport& p) {
  return {{"sums_k_plus", p.sums_k_plus},
          {"sums_k_minus", p.sums_k_minus},
          {"sums_k_full", p.sums_k_full},
          {"min_isotropic_plus", p.min_isotropic_plus},
          {"min_isotropic_minus", p.min_isotropic_minus},
          {"halfpic_plus", p.halfpic_plus},
          {"halfpic_minus", p.halfpic_minus},
          {"classification", p.classification}};
}

json identity_json(const IdentityResult& r) {
  json res = json::object(), vals = json::object();
  for (const auto& [k, v] : r.residuals) res[k] = v;
  for (const auto& [k, v] : r.values) vals[k] = v;
  return {{"identity", r.identity}, {"x", vec_json(r.x)}, {"residuals", res}, {"values", vals}, {"scale", r.scale}};
}

json study_json(const ConvergenceStudy& s) {
  json recs = json::array();
  for (const auto& r : s.records)
    recs.push_back({{"name", r.name},
                    {"steps", r.steps},
                    {"residuals", r.residuals},
                    {"floors", r.floors},
                    {"ratios", r.ratios},
                    {"observed_order", r.observed_order},
                    {"status", to_string(r.status)}});
  return {{"identity", s.identity}, {"x", vec_json(s.x)}, {"nominal_order", s.nominal_order}, {"records", recs}};
}

}  // namespace fourcurv

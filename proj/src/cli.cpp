#include "fourcurv/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "fourcurv/models.hpp"
#include "fourcurv/suite.hpp"

namespace fourcurv {

namespace {

struct Common {
  std::string out_path;
  std::string timestamp;
  int jobs = 1;
};

struct TensorInput {
  std::string tensor;
  std::string model;
  std::vector<std::string> params;

  json descriptor() const {
    if (!model.empty()) {
      json p = json::object();
      for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidInput("--param expects key=value, got '" + kv + "'");
        try {
          p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
          throw InvalidInput("--param value is not a number: '" + kv + "'");
        }
      }
      return {{"kind", "model"}, {"name", model}, {"params", p}};
    }
    if (tensor.empty()) throw InvalidInput("give --tensor or --model");
    return load_json_arg(tensor);
  }
};

void emit(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << doc.dump(2) << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write '" + path + "'");
  f << doc.dump(2) << "\n";
}

json wrap(const std::string& command, const json& input, const json& config, const Common& c, json report) {
  return {{"manifest", make_manifest(command, input, config, manifest_timestamp(c.timestamp))}, {"report", std::move(report)}};
}

void add_tensor_options(CLI::App* sub, TensorInput& in) {
  sub->add_option("--tensor", in.tensor, "tensor JSON (inline, file path, or model name)");
  sub->add_option("--model", in.model, "model name: S4, H4, R4, CP2, S2xS2, S2axS2b");
  sub->add_option("--param", in.params, "model parameter key=value (repeatable)");
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-o,--out", c.out_path, "write the JSON report here instead of stdout");
  sub->add_option("--timestamp", c.timestamp, "manifest timestamp (default: SOURCE_DATE_EPOCH, then now)");
}

struct VerifyOptions {
  std::string identity;
  std::string chart;
  std::string structure;
  int points = 5;
  double h = 0.05;
  int order = 4;
  int richardson = 0;
  int levels = 3;
  unsigned seed = 1;
  std::string csv;
};

const std::vector<std::string> kChartIdentities = {"hamilton", "weitzenbock-einstein", "cgy"};
const std::vector<std::string> kStructureIdentities = {"prop32", "weitzenbock-gqe", "lemma31"};

// Box of half-width at most 1 around the centre of the chart domain.
Box sample_box(const Box& d) {
  const Vec4 c = 0.5 * (d.lo + d.hi);
  const Vec4 w = (0.5 * (d.hi - d.lo)).cwiseMin(Vec4::Constant(1.0));
  return {c - w, c + w};
}

int run_verify(const VerifyOptions& o, const Common& c, std::ostream& out) {
  DiffConfig dc{o.h, o.order, o.richardson};
  check_config(dc);
  if (o.points < 1) throw InvalidInput("--points must be positive");
  if (o.levels < 2) throw InvalidInput("--levels must be at least 2");
  const bool chart_id = std::count(kChartIdentities.begin(), kChartIdentities.end(), o.identity) > 0;
  const bool struct_id = std::count(kStructureIdentities.begin(), kStructureIdentities.end(), o.identity) > 0;
  if (!chart_id && !struct_id) throw InvalidInput("unknown identity '" + o.identity + "'");

  ChartPtr chart;
  std::optional<QuasiEinsteinStructure> qe;
  json input;
  if (chart_id) {
    if (o.chart.empty()) throw InvalidInput(o.identity + " needs --chart");
    input = load_json_arg(o.chart);
    chart = chart_from_json(input);
  } else {
    if (o.structure.empty()) throw InvalidInput(o.identity + " needs --structure");
    input = load_json_arg(o.structure);
    qe = structure_from_json(input);
    chart = qe->chart;
  }
  PointVerifier fn;
  if (o.identity == "hamilton") fn = [&](const Vec4& x, const DiffConfig& d) { return verify_hamilton(*chart, x, d); };
  if (o.identity == "weitzenbock-einstein")
    fn = [&](const Vec4& x, const DiffConfig& d) { return verify_weitzenbock_einstein(*chart, x, d); };
  if (o.identity == "cgy") fn = [&](const Vec4& x, const DiffConfig& d) { return cgy_integrand(*chart, x, d); };
  if (o.identity == "prop32") fn = [&](const Vec4& x, const DiffConfig& d) { return verify_prop32(*qe, x, d); };
  if (o.identity == "lemma31") fn = [&](const Vec4& x, const DiffConfig& d) { return verify_lemma31(*qe, x, d); };
  if (o.identity == "weitzenbock-gqe")
    fn = [&](const Vec4& x, const DiffConfig& d) { return verify_weitzenbock_gqe(*qe, x, d); };

  const auto pts = interior_points(sample_box(chart->domain()), o.points, o.seed, 0.2);
  std::vector<ConvergenceStudy> studies(pts.size());
  std::vector<IdentityResult> base(pts.size());
  parallel_for(static_cast<int>(pts.size()), c.jobs, [&](int i) {
    if (o.identity == "cgy")
      base[i] = fn(pts[i], dc);  // pointwise values, nothing to refine
    else
      studies[i] = convergence_study(fn, pts[i], dc, o.levels);
  });

  std::ostringstream csv;
  csv << std::setprecision(17) << "point,x1,x2,x3,x4,h,name,value\n";
  json summary = json::object(), per_point = json::array();
  if (o.identity == "cgy") {
    for (size_t i = 0; i < pts.size(); ++i) {
      for (const auto& [n, v] : base[i].residuals)
        csv << i << "," << pts[i][0] << "," << pts[i][1] << "," << pts[i][2] << "," << pts[i][3] << "," << o.h << ","
            << n << "," << v << "\n";
      per_point.push_back(identity_json(base[i]));
    }
  } else {
    std::map<std::string, std::vector<double>> orders;
    std::map<std::string, std::vector<std::string>> statuses;
    std::vector<std::string> names;
    for (size_t i = 0; i < pts.size(); ++i) {
      for (const auto& r : studies[i].records) {
        if (!statuses.count(r.name)) names.push_back(r.name);
        statuses[r.name].push_back(to_string(r.status));
        orders[r.name].push_back(r.observed_order);
        for (size_t l = 0; l < r.steps.size(); ++l)
          csv << i << "," << pts[i][0] << "," << pts[i][1] << "," << pts[i][2] << "," << pts[i][3] << "," << r.steps[l]
              << "," << r.name << "," << r.residuals[l] << "\n";
      }
      per_point.push_back(study_json(studies[i]));
    }
    for (const auto& n : names) {
      auto v = orders[n];
      std::sort(v.begin(), v.end());
      const bool conv = std::all_of(statuses[n].begin(), statuses[n].end(), [](const std::string& s) {
        return s == "nominal" || s == "superconvergent" || s == "floor";
      });
      summary[n] = {{"median_observed_order", v[v.size() / 2]}, {"statuses", statuses[n]}, {"converges", conv}};
    }
  }
  if (!o.csv.empty()) {
    if (o.csv == "-") {
      out << csv.str();
    } else {
      std::ofstream f(o.csv);
      if (!f) throw InvalidInput("cannot write '" + o.csv + "'");
      f << csv.str();
    }
  }
  const json config = {{"h", o.h},       {"order", o.order}, {"richardson", o.richardson}, {"levels", o.levels},
                       {"points", o.points}, {"seed", o.seed}};
  json report = {{"identity", o.identity},
                 {"target", chart_id ? chart->name() : qe->name},
                 {"nominal_order", o.order + 2 * o.richardson},
                 {"summary", summary},
                 {"points", per_point}};
  if (o.csv != "-") emit(wrap("verify", input, config, c, report), c.out_path, out);
  return 0;
}

struct SuiteOptions {
  std::string json_path;
  std::string archive;
  std::vector<int> only;
  std::uint64_t seed = SuiteConfig{}.seed;
};

int run_suite_cmd(const SuiteOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
  SuiteConfig cfg;
  cfg.seed = o.seed;
  cfg.jobs = c.jobs;
  cfg.archive_dir = o.archive;
  cfg.only = o.only;
  for (int id : cfg.only)
    if (id < 1 || id > kCriterionCount) throw InvalidInput("no criterion " + std::to_string(id));
  const bool json_stdout = o.json_path == "-";
  std::ostream& text = json_stdout ? err : out;
  const SuiteReport rep = run_suite(cfg, [&](const CriterionResult& r) {
    text << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title << " | " << r.detail << " ["
         << std::fixed << std::setprecision(2) << r.seconds << " s]" << std::defaultfloat << "\n"
         << std::flush;
  });
  if (!o.json_path.empty()) {
    const json config = {{"seed", cfg.seed},
                         {"tensor_samples", cfg.tensor_samples},
                         {"positivity_samples", cfg.positivity_samples},
                         {"chart_points", cfg.chart_points},
                         {"only", cfg.only}};
    emit(wrap("suite", json::object(), config, c, rep.to_json()), json_stdout ? "" : o.json_path, out);
  }
  text << (rep.all_pass() ? "all criteria passed" : "some criteria FAILED") << "\n";
  return rep.all_pass() ? 0 : 1;
}

void error_json(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", {{"type", kind}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Four-dimensional curvature workbench"};
  app.set_version_flag("--version", std::string(FOURCURV_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("-j,--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);

  TensorInput tin;
  auto* dec = app.add_subcommand("decompose", "duality and standard decomposition");
  auto* ber = app.add_subcommand("berger", "Berger normal form of an Einstein-type tensor");
  auto* quad = app.add_subcommand("quadratic", "B, Q(Rm), component table and pairings");
  auto* cls = app.add_subcommand("classify", "positivity report");
  IsotropicBudget budget;
  cls->add_option("--samples", budget.starts, "random starts for the isotropic-curvature minimization");
  cls->add_option("--seed", budget.seed, "seed for the starts");
  for (auto* s : {dec, ber, quad, cls}) {
    add_tensor_options(s, tin);
    add_common(s, common);
  }

  VerifyOptions vo;
  auto* ver = app.add_subcommand("verify", "pointwise identity verification with step refinement");
  ver->set_help_flag("--help", "print help");
  ver->add_option("--identity", vo.identity, "hamilton, weitzenbock-einstein, cgy, prop32, weitzenbock-gqe, lemma31")
      ->required();
  ver->add_option("--chart", vo.chart, "chart JSON or shorthand (flat, s4, h4, fs, s2xs2, cylinder, sds)");
  ver->add_option("--structure", vo.structure, "structure JSON or shorthand (gaussian, bump, fs-bump, cylinder)");
  ver->add_option("--points", vo.points, "interior sample points");
  ver->add_option("--h", vo.h, "coarsest step");
  ver->add_option("--order", vo.order, "2 or 4");
  ver->add_option("--richardson", vo.richardson, "Richardson levels 0..2");
  ver->add_option("--levels", vo.levels, "refinement levels");
  ver->add_option("--seed", vo.seed, "sample point seed");
  ver->add_option("--csv", vo.csv, "per-point residual table ('-' for stdout)");
  add_common(ver, common);

  SuiteOptions so;
  auto* sui = app.add_subcommand("suite", "run the acceptance suite");
  sui->add_option("--json", so.json_path, "write the pass/fail document ('-' for stdout)");
  sui->add_option("--archive", so.archive, "directory for archived side reports");
  sui->add_option("--only", so.only, "criterion ids to run");
  sui->add_option("--seed", so.seed, "base seed");
  sui->add_option("--timestamp", common.timestamp, "manifest timestamp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    error_json(err, "UsageError", e.what());
    return 2;
  }

  try {
    auto tensor_cmd = [&](const std::string& name, const std::function<json(const CurvatureTensor&)>& f) {
      const json input = tin.descriptor();
      const CurvatureTensor t = tensor_from_json(input);
      json config = json::object();
      if (name == "classify") config = {{"samples", budget.starts}, {"seed", budget.seed}};
      emit(wrap(name, input, config, common, f(t)), common.out_path, out);
      return 0;
    };
    if (*dec) return tensor_cmd("decompose", decompose_report);
    if (*ber) return tensor_cmd("berger", berger_report);
    if (*quad) return tensor_cmd("quadratic", quadratic_report);
    if (*cls)
      return tensor_cmd("classify", [&](const CurvatureTensor& t) { return positivity_report(classify_point(t, budget)); });
    if (*ver) return run_verify(vo, common, out);
    if (*sui) return run_suite_cmd(so, common, out, err);
  } catch (const SymmetryViolation& e) {
    err << json{{"error",
                 {{"type", e.kind()},
                  {"message", e.what()},
                  {"identity", to_string(e.which())},
                  {"index", {e.index()[0] + 1, e.index()[1] + 1, e.index()[2] + 1, e.index()[3] + 1}},
                  {"magnitude", e.magnitude()}}}}
               .dump()
        << "\n";
    return 2;
  } catch (const Error& e) {
    error_json(err, e.kind(), e.what());
    return 2;
  } catch (const json::exception& e) {
    error_json(err, "SchemaError", e.what());
    return 2;
  } catch (const std::exception& e) {
    error_json(err, "InternalError", e.what());
    return 2;
  }
  return 2;
}

}  // namespace fourcurv

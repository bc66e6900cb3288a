#pragma once

// JSON input parsing and report serialization.

#include <string>

#include "json.hpp"

#include "fourcurv/berger.hpp"
#include "fourcurv/positivity.hpp"
#include "fourcurv/verify.hpp"

namespace fourcurv {

using nlohmann::json;

/// Inline JSON, a path to a JSON file, or (where supported) a shorthand name.
json load_json_arg(const std::string& arg);

/// {"kind":"components","entries":[[i,j,k,l,value],...]} with 1-based indices,
/// {"kind":"model","name":"CP2","params":{...}}, or
/// {"kind":"synth_einstein","w_plus":[...],"w_minus":[...],"R":...}.
CurvatureTensor tensor_from_json(const json& j);
/// Independent nonzero components over pairs of the pair basis, in the entries format.
json tensor_to_json(const Tensor4& t);

/// Shorthands: flat, s4, h4, fs, s2xs2, cylinder, sds. Objects:
/// {"kind":"model","name":..,"params":{..}}, {"kind":"conformal_flat","f":expr},
/// {"kind":"conformal","base":chart,"f":expr}, {"kind":"linear","base":chart,"matrix":[[..]]},
/// {"kind":"sds","mass":..,"lambda":..}.
ChartPtr chart_from_json(const json& j);

/// Shorthands: gaussian, bump, linear, fs-bump, cylinder. Objects:
/// {"kind":"gaussian_soliton","lambda":..}, {"kind":"conformal_to_einstein","base":chart,"f":expr},
/// {"kind":"cylinder_soliton","a":..}, {"kind":"einstein","chart":chart,"m":..}.
QuasiEinsteinStructure structure_from_json(const json& j);

/// Bump potential used by the shorthand structures.
inline constexpr const char* kBumpPotential = "0.1*exp(-(x1^2+x2^2+x3^2+x4^2))";

json vec_json(const Eigen::VectorXd& v);
json mat_json(const Eigen::MatrixXd& m);

json decompose_report(const CurvatureTensor& t);
json berger_report(const CurvatureTensor& t);
json quadratic_report(const CurvatureTensor& t);
json positivity_report(const PositivityReport& r);
json identity_json(const IdentityResult& r);
json study_json(const ConvergenceStudy& s);

}  // namespace fourcurv

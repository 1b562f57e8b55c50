#pragma once

#include "wcre/empirical.hpp"
#include "wcre/harness.hpp"

#include <string>
#include <vector>

namespace wcre {

UnivariateModel univariate_from_json(const json& j);
json univariate_to_json(const UnivariateModel& m);
MultivariateModel multivariate_from_json(const json& j);
bool is_multivariate_json(const json& j);
WeightFunction weight_from_json(const json& j);
json weight_to_json(const WeightFunction& w);
// a univariate weight maps through JointWeight::from_univariate; {"kind": "product"} lists factors
JointWeight joint_weight_from_json(const json& j, int n);
StochasticKernel kernel_from_json(const json& j);
Eigen::MatrixXd matrix_from_json(const json& j);

QuadratureSpec spec_from_json(const json& j, QuadratureSpec base = {});
json spec_to_json(const QuadratureSpec& s);

CheckInstance instance_from_json(const json& j);
json instance_to_json(const CheckInstance& inst);
std::vector<CheckInstance> catalog_from_json(const json& j);
json catalog_to_json(const std::vector<CheckInstance>& c);

json report_to_json(const CheckReport& r);
json reports_to_json(const std::vector<CheckReport>& rs);
json estimate_to_json(const EmpiricalEstimate& e);

// inline JSON when the text starts with '{' or '[', otherwise a file path
json parse_json_arg(const std::string& text_or_path);
json read_json_file(const std::string& path);
// finite doubles as numbers, non-finite as null
json number(double v);
std::string dump(const json& j);

}  // namespace wcre

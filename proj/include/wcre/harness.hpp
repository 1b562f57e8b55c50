#pragma once

#include "wcre/entropy_multivariate.hpp"
#include "wcre/kernel.hpp"
#include "wcre/multivariate.hpp"
#include "wcre/quadrature.hpp"
#include "wcre/univariate.hpp"
#include "wcre/weight.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace wcre {

using json = nlohmann::json;

enum class Verdict { pass, hypothesis_not_met, fail, divergent, unimplemented, error };
std::string verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& s);

enum class Sign { nonneg, nonpos };

struct HypothesisValue {
    std::string name;
    double value = 0.0;
    Sign required = Sign::nonneg;
    bool met = false;
};

// asserted as lhs <= rhs; slack = rhs - lhs
struct Conclusion {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double tolerance = 0.0;
    std::vector<std::string> requires_hypotheses;
    bool asserted = false;
    bool holds = false;
};

struct CheckReport {
    std::string check_id;
    std::string instance_id;
    std::vector<HypothesisValue> hypotheses;
    bool hypothesis_met = false;
    std::vector<Conclusion> conclusions;
    // the tightest asserted conclusion, or the first one when none is asserted
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::error;
    std::vector<std::pair<std::string, double>> diagnostics;
    std::vector<std::string> notes;
};

// Models, weight and parameters stay as JSON and are built when the check runs.
struct CheckInstance {
    std::string id;
    std::string check_id;
    json models = json::array();
    json weight = json::object();
    json params = json::object();
    QuadratureSpec spec;
    std::uint64_t seed = 0;
};

// tolerance classes
inline constexpr double tol_identity = 1e-6;
inline constexpr double tol_quadrature = 1e-6;
inline constexpr double tol_grid = 1e-5;
inline constexpr double mc_standard_errors = 3.0;

class ReportBuilder {
public:
    ReportBuilder(const CheckInstance& inst, double tolerance);

    double tolerance() const noexcept { return tol_; }
    // met when the value has the required sign up to the tolerance
    bool hypothesis(const std::string& name, double value, Sign required);
    // empty `requires_` means every hypothesis recorded so far
    void conclusion(const std::string& name, double lhs, double rhs, std::vector<std::string> requires_ = {},
                    double tolerance = -1.0);
    void diagnostic(const std::string& name, double value);
    void note(const std::string& text);
    CheckReport finish();
    CheckReport unimplemented(const std::string& reason);

private:
    CheckReport r_;
    double tol_;
};

// typed access to an instance's JSON
class InstanceView {
public:
    explicit InstanceView(const CheckInstance& inst) : inst_(inst) {}
    const CheckInstance& instance() const noexcept { return inst_; }
    const QuadratureSpec& spec() const noexcept { return inst_.spec; }
    std::uint64_t seed() const noexcept { return inst_.seed; }

    std::size_t model_count() const { return inst_.models.size(); }
    UnivariateModel univariate(std::size_t i) const;
    MultivariateModel multivariate(std::size_t i) const;
    StochasticKernel kernel(std::size_t i) const;
    WeightFunction weight() const;
    JointWeight joint_weight(int n) const;

    bool has(const std::string& key) const;
    double param(const std::string& key) const;
    double param(const std::string& key, double fallback) const;
    std::vector<double> param_list(const std::string& key) const;
    Eigen::MatrixXd matrix(const std::string& key) const;
    std::string text(const std::string& key, const std::string& fallback) const;

private:
    const CheckInstance& inst_;
};

using CheckFn = std::function<CheckReport(const InstanceView&)>;

class CheckRegistry {
public:
    static CheckRegistry& global();
    void add(const std::string& id, CheckFn fn);
    bool contains(const std::string& id) const;
    const CheckFn& get(const std::string& id) const;
    std::vector<std::string> ids() const;

private:
    std::map<std::string, CheckFn> fns_;
};

// defined in the checks_*.cpp files
void register_univariate_checks(CheckRegistry& r);
void register_bound_checks(CheckRegistry& r);
void register_multivariate_checks(CheckRegistry& r);
void register_maxent_checks(CheckRegistry& r);

// never throws: divergence maps to DIVERGENT, other failures to ERROR with a note
CheckReport run_check(const CheckInstance& inst);
// reports in input order; jobs <= 1 runs inline
std::vector<CheckReport> run_suite(const std::vector<CheckInstance>& instances, int jobs = 1);

struct SuiteSummary {
    std::map<std::string, std::map<std::string, int>> per_check;  // check -> verdict -> count
    std::map<std::string, int> totals;
};
SuiteSummary summarize(const std::vector<CheckReport>& reports);

// the shipped catalog, one or more instances per check id
std::vector<CheckInstance> default_catalog();
std::vector<std::string> all_check_ids();

}  // namespace wcre

#include "wcre/json_io.hpp"

#include "wcre/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace wcre {

namespace {

double num(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "' in " + j.dump());
    const json& v = j.at(key);
    if (!v.is_number()) throw InputError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

double num_or(const json& j, const char* key, double fallback) { return j.contains(key) ? num(j, key) : fallback; }

std::string str(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_string())
        throw InputError(std::string("missing string field '") + key + "' in " + j.dump());
    return j.at(key).get<std::string>();
}

std::vector<double> numbers(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) throw InputError(std::string("field '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw InputError(std::string("field '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<UnivariateModel> marginals_of(const json& j, std::size_t expected) {
    if (!j.contains("marginals") || !j.at("marginals").is_array())
        throw InputError("multivariate model needs a 'marginals' array");
    std::vector<UnivariateModel> out;
    for (const auto& m : j.at("marginals")) out.push_back(univariate_from_json(m));
    if (expected && out.size() != expected)
        throw InputError("expected " + std::to_string(expected) + " marginals, got " + std::to_string(out.size()));
    return out;
}

}  // namespace

UnivariateModel univariate_from_json(const json& j) {
    const std::string f = str(j, "family");
    if (f == "uniform") return UnivariateModel::uniform(num(j, "a"), num(j, "b"));
    if (f == "exponential") return UnivariateModel::exponential(num(j, "lambda"));
    if (f == "weibull") return UnivariateModel::weibull(num(j, "lambda"), num(j, "q"));
    if (f == "gaussian") return UnivariateModel::gaussian(num(j, "mu"), num(j, "sigma"));
    if (f == "gamma") return UnivariateModel::gamma(num(j, "k"), num(j, "theta"));
    if (f == "lomax") return UnivariateModel::lomax(num(j, "alpha"), num_or(j, "scale", 1.0));
    if (f == "empirical") return UnivariateModel::empirical(numbers(j, "sample"));
    if (f == "point_mass") return UnivariateModel::point_mass(num(j, "c"));
    if (f == "mixture") {
        std::vector<UnivariateModel> parts;
        if (!j.contains("components") || !j.at("components").is_array())
            throw InputError("mixture needs a 'components' array");
        for (const auto& c : j.at("components")) parts.push_back(univariate_from_json(c));
        return UnivariateModel::mixture(numbers(j, "weights"), std::move(parts));
    }
    if (f == "fgm_conditional")
        return UnivariateModel::fgm_conditional(univariate_from_json(j.at("marginal")), num(j, "k"));
    throw InputError("unknown univariate family '" + f + "'");
}

json univariate_to_json(const UnivariateModel& m) {
    const std::string f = m.name();
    json j{{"family", f}};
    if (const auto* e = dynamic_cast<const EmpiricalFamily*>(&m.family())) {
        j["sample"] = e->sorted_sample();
    } else if (const auto* x = dynamic_cast<const MixtureFamily*>(&m.family())) {
        j["weights"] = x->weights();
        j["components"] = json::array();
        for (const auto& p : x->parts()) j["components"].push_back(univariate_to_json(p));
    } else if (const auto* c = dynamic_cast<const FgmConditionalFamily*>(&m.family())) {
        j["marginal"] = univariate_to_json(c->marginal());
        j["k"] = c->k();
    } else {
        for (const auto& [k, v] : m.params()) j[k] = v;
    }
    return j;
}

bool is_multivariate_json(const json& j) {
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) return false;
    const auto f = j.at("family").get<std::string>();
    return f == "independent" || f == "fgm" || f == "fgm3" || f == "fgm_chain" || f == "mvgaussian" ||
           (f == "gaussian" && j.contains("cov"));
}

MultivariateModel multivariate_from_json(const json& j) {
    const std::string f = str(j, "family");
    if (f == "independent") return MultivariateModel::independent(marginals_of(j, 0));
    if (f == "gaussian" || f == "mvgaussian") {
        const Eigen::MatrixXd c = matrix_from_json(j.at("cov"));
        std::vector<double> mean = j.contains("mean") ? numbers(j, "mean") : std::vector<double>(static_cast<std::size_t>(c.rows()), 0.0);
        return MultivariateModel::gaussian(std::move(mean), c);
    }
    if (f == "fgm") {
        auto m = marginals_of(j, 2);
        return MultivariateModel::fgm(num(j, "theta"), m[0], m[1]);
    }
    if (f == "fgm3") {
        auto m = marginals_of(j, 3);
        return MultivariateModel::fgm3(num(j, "t12"), num(j, "t13"), num(j, "t23"), m[0], m[1], m[2]);
    }
    if (f == "fgm_chain") {
        auto m = marginals_of(j, 3);
        return MultivariateModel::fgm_chain(num(j, "t12"), num(j, "t23"), m[0], m[1], m[2]);
    }
    throw InputError("unknown multivariate family '" + f + "'");
}

WeightFunction weight_from_json(const json& j) {
    const std::string k = str(j, "kind");
    if (k == "constant") return WeightFunction::constant(num(j, "c"));
    if (k == "power") {
        if (j.contains("c")) return WeightFunction::scaled_power(num(j, "c"), num(j, "a"));
        return WeightFunction::power(num(j, "a"));
    }
    if (k == "scaled_power") return WeightFunction::scaled_power(num(j, "c"), num(j, "a"));
    if (k == "exponential") {
        auto w = WeightFunction::exponential(num(j, "r"));
        return j.contains("c") ? w.scaled(num(j, "c")) : w;
    }
    if (k == "tabulated") {
        std::vector<Knot> knots;
        for (const auto& p : j.at("knots")) {
            if (!p.is_array() || p.size() != 2) throw InputError("tabulated knots are [x, value] pairs");
            knots.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        return WeightFunction::tabulated(std::move(knots));
    }
    throw InputError("unknown weight kind '" + k + "'");
}

json weight_to_json(const WeightFunction& w) {
    json j{{"kind", w.kind_name()}};
    switch (w.kind()) {
        case WeightFunction::Kind::constant: j["c"] = w.coefficient(); break;
        case WeightFunction::Kind::power: j["a"] = w.exponent(); break;
        case WeightFunction::Kind::scaled_power:
            j["c"] = w.coefficient();
            j["a"] = w.exponent();
            break;
        case WeightFunction::Kind::exponential:
            j["r"] = w.exponent();
            if (w.coefficient() != 1.0) j["c"] = w.coefficient();
            break;
        case WeightFunction::Kind::tabulated:
            j["knots"] = json::array();
            for (const auto& k : w.knots()) j["knots"].push_back({k.x, k.value});
            break;
    }
    return j;
}

JointWeight joint_weight_from_json(const json& j, int n) {
    if (str(j, "kind") == "product") {
        std::vector<WeightFunction> f;
        for (const auto& x : j.at("factors")) f.push_back(weight_from_json(x));
        if (static_cast<int>(f.size()) != n) throw InputError("product weight needs one factor per coordinate");
        return JointWeight::product(std::move(f), num_or(j, "scale", 1.0));
    }
    return JointWeight::from_univariate(weight_from_json(j), n);
}

StochasticKernel kernel_from_json(const json& j) {
    const std::string k = str(j, "kind");
    if (k == "gaussian_smoothing") return StochasticKernel::gaussian_smoothing(num(j, "h"));
    if (k == "grid_matrix") return StochasticKernel::grid_matrix(numbers(j, "edges"), matrix_from_json(j.at("matrix")));
    throw InputError("unknown kernel kind '" + k + "'");
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("matrix must be a nonempty array of rows");
    const auto r = static_cast<Eigen::Index>(j.size());
    const auto c = static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) throw InputError("matrix rows must have equal length");
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    return m;
}

QuadratureSpec spec_from_json(const json& j, QuadratureSpec s) {
    if (j.is_null()) return s;
    if (!j.is_object()) throw InputError("quadrature spec must be an object");
    s.rel_tol = num_or(j, "rel_tol", s.rel_tol);
    s.abs_tol = num_or(j, "abs_tol", s.abs_tol);
    s.max_subdivisions = static_cast<int>(num_or(j, "max_subdivisions", s.max_subdivisions));
    s.tail_mass = num_or(j, "tail_mass", s.tail_mass);
    s.grid_points_per_dim = static_cast<int>(num_or(j, "grid_points_per_dim", s.grid_points_per_dim));
    s.grid_rel_tol = num_or(j, "grid_rel_tol", s.grid_rel_tol);
    s.validate();
    return s;
}

json spec_to_json(const QuadratureSpec& s) {
    return {{"rel_tol", s.rel_tol},
            {"abs_tol", s.abs_tol},
            {"max_subdivisions", s.max_subdivisions},
            {"tail_mass", s.tail_mass},
            {"grid_points_per_dim", s.grid_points_per_dim},
            {"grid_rel_tol", s.grid_rel_tol}};
}

CheckInstance instance_from_json(const json& j) {
    CheckInstance c;
    c.check_id = str(j, "check_id");
    c.id = j.contains("id") ? str(j, "id") : c.check_id;
    if (j.contains("models")) c.models = j.at("models");
    if (j.contains("weight")) c.weight = j.at("weight");
    if (j.contains("params")) c.params = j.at("params");
    if (j.contains("spec")) c.spec = spec_from_json(j.at("spec"));
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (!c.models.is_array()) throw InputError("instance 'models' must be an array");
    if (!c.params.is_object()) throw InputError("instance 'params' must be an object");
    return c;
}

json instance_to_json(const CheckInstance& c) {
    return {{"id", c.id},         {"check_id", c.check_id},       {"models", c.models}, {"weight", c.weight},
            {"params", c.params}, {"spec", spec_to_json(c.spec)}, {"seed", c.seed}};
}

std::vector<CheckInstance> catalog_from_json(const json& j) {
    const json& arr = j.is_object() && j.contains("instances") ? j.at("instances") : j;
    if (!arr.is_array()) throw InputError("catalog must be an array of instances");
    std::vector<CheckInstance> out;
    for (const auto& x : arr) out.push_back(instance_from_json(x));
    return out;
}

json catalog_to_json(const std::vector<CheckInstance>& c) {
    json arr = json::array();
    for (const auto& x : c) arr.push_back(instance_to_json(x));
    return arr;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_to_json(const CheckReport& r) {
    json hyp = json::array();
    for (const auto& h : r.hypotheses)
        hyp.push_back({{"name", h.name},
                       {"value", number(h.value)},
                       {"required_sign", h.required == Sign::nonneg ? ">= 0" : "<= 0"},
                       {"met", h.met}});
    json con = json::array();
    for (const auto& c : r.conclusions)
        con.push_back({{"name", c.name},
                       {"lhs", number(c.lhs)},
                       {"rhs", number(c.rhs)},
                       {"slack", number(c.slack)},
                       {"tolerance", c.tolerance},
                       {"requires", c.requires_hypotheses},
                       {"asserted", c.asserted},
                       {"holds", c.holds}});
    json diag = json::object();
    for (const auto& [k, v] : r.diagnostics) diag[k] = number(v);
    return {{"check_id", r.check_id},
            {"instance_id", r.instance_id},
            {"hypothesis_values", hyp},
            {"hypothesis_met", r.hypothesis_met},
            {"conclusions", con},
            {"lhs", number(r.lhs)},
            {"rhs", number(r.rhs)},
            {"slack", number(r.slack)},
            {"tolerance", r.tolerance},
            {"verdict", verdict_name(r.verdict)},
            {"diagnostics", diag},
            {"notes", r.notes}};
}

json reports_to_json(const std::vector<CheckReport>& rs) {
    json arr = json::array();
    for (const auto& r : rs) arr.push_back(report_to_json(r));
    return arr;
}

json estimate_to_json(const EmpiricalEstimate& e) {
    json j{{"value", number(e.value)}, {"n", e.n}, {"pieces", e.pieces}};
    if (e.bootstrap_ci) {
        j["bootstrap_ci"] = {number(e.bootstrap_ci->first), number(e.bootstrap_ci->second)};
        j["level"] = e.level;
    } else {
        j["bootstrap_ci"] = nullptr;
    }
    return j;
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

json parse_json_arg(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b != std::string::npos && (s[b] == '{' || s[b] == '[')) {
        try {
            return json::parse(s);
        } catch (const json::exception& e) {
            throw InputError(std::string("inline JSON: ") + e.what());
        }
    }
    return read_json_file(s);
}

std::string dump(const json& j) { return j.dump(2); }

}  // namespace wcre

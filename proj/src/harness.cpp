#include "wcre/harness.hpp"

#include "wcre/errors.hpp"
#include "wcre/json_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace wcre {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::hypothesis_not_met: return "HYPOTHESIS_NOT_MET";
        case Verdict::fail: return "FAIL";
        case Verdict::divergent: return "DIVERGENT";
        case Verdict::unimplemented: return "UNIMPLEMENTED";
        case Verdict::error: return "ERROR";
    }
    return "ERROR";
}

Verdict verdict_from_name(const std::string& s) {
    for (Verdict v : {Verdict::pass, Verdict::hypothesis_not_met, Verdict::fail, Verdict::divergent,
                      Verdict::unimplemented, Verdict::error})
        if (verdict_name(v) == s) return v;
    throw InputError("unknown verdict '" + s + "'");
}

ReportBuilder::ReportBuilder(const CheckInstance& inst, double tolerance) : tol_(tolerance) {
    r_.check_id = inst.check_id;
    r_.instance_id = inst.id;
    r_.tolerance = tolerance;
}

bool ReportBuilder::hypothesis(const std::string& name, double value, Sign required) {
    const bool met = std::isfinite(value) && (required == Sign::nonneg ? value >= -tol_ : value <= tol_);
    r_.hypotheses.push_back({name, value, required, met});
    return met;
}

void ReportBuilder::conclusion(const std::string& name, double lhs, double rhs, std::vector<std::string> req,
                               double tolerance) {
    Conclusion c;
    c.name = name;
    c.lhs = lhs;
    c.rhs = rhs;
    c.slack = rhs - lhs;
    c.tolerance = tolerance >= 0 ? tolerance : tol_;
    if (req.empty())
        for (const auto& h : r_.hypotheses) req.push_back(h.name);
    c.requires_hypotheses = std::move(req);
    r_.conclusions.push_back(std::move(c));
}

void ReportBuilder::diagnostic(const std::string& name, double value) { r_.diagnostics.emplace_back(name, value); }

void ReportBuilder::note(const std::string& text) { r_.notes.push_back(text); }

CheckReport ReportBuilder::finish() {
    r_.hypothesis_met = std::all_of(r_.hypotheses.begin(), r_.hypotheses.end(), [](const auto& h) { return h.met; });
    if (r_.conclusions.empty()) {
        r_.verdict = Verdict::error;
        r_.notes.push_back("check produced no conclusion");
        return r_;
    }
    bool any_asserted = false, any_fail = false;
    const Conclusion* tight = nullptr;
    for (auto& c : r_.conclusions) {
        c.asserted = std::all_of(c.requires_hypotheses.begin(), c.requires_hypotheses.end(), [&](const std::string& n) {
            for (const auto& h : r_.hypotheses)
                if (h.name == n) return h.met;
            return false;
        });
        c.holds = std::isfinite(c.slack) && c.slack >= -c.tolerance;
        if (!c.asserted) continue;
        any_asserted = true;
        if (!c.holds) any_fail = true;
        if (!tight || !(c.slack >= tight->slack)) tight = &c;
    }
    if (!tight) tight = &r_.conclusions.front();
    r_.lhs = tight->lhs;
    r_.rhs = tight->rhs;
    r_.slack = tight->slack;
    r_.tolerance = tight->tolerance;
    r_.verdict = any_fail ? Verdict::fail : any_asserted ? Verdict::pass : Verdict::hypothesis_not_met;
    return r_;
}

CheckReport ReportBuilder::unimplemented(const std::string& reason) {
    r_.verdict = Verdict::unimplemented;
    r_.notes.push_back(reason);
    return r_;
}

UnivariateModel InstanceView::univariate(std::size_t i) const {
    if (i >= inst_.models.size()) throw InputError("instance " + inst_.id + " needs model " + std::to_string(i));
    return univariate_from_json(inst_.models[i]);
}

MultivariateModel InstanceView::multivariate(std::size_t i) const {
    if (i >= inst_.models.size()) throw InputError("instance " + inst_.id + " needs model " + std::to_string(i));
    return multivariate_from_json(inst_.models[i]);
}

StochasticKernel InstanceView::kernel(std::size_t i) const {
    if (i >= inst_.models.size()) throw InputError("instance " + inst_.id + " needs kernel " + std::to_string(i));
    return kernel_from_json(inst_.models[i]);
}

WeightFunction InstanceView::weight() const {
    if (inst_.weight.is_null() || inst_.weight.empty()) return WeightFunction::constant(1.0);
    return weight_from_json(inst_.weight);
}

JointWeight InstanceView::joint_weight(int n) const {
    if (inst_.weight.is_null() || inst_.weight.empty()) return JointWeight::constant(1.0);
    return joint_weight_from_json(inst_.weight, n);
}

bool InstanceView::has(const std::string& key) const { return inst_.params.contains(key); }

double InstanceView::param(const std::string& key) const {
    if (!has(key) || !inst_.params.at(key).is_number())
        throw InputError("instance " + inst_.id + " needs numeric param '" + key + "'");
    return inst_.params.at(key).get<double>();
}

double InstanceView::param(const std::string& key, double fallback) const { return has(key) ? param(key) : fallback; }

std::vector<double> InstanceView::param_list(const std::string& key) const {
    if (!has(key) || !inst_.params.at(key).is_array())
        throw InputError("instance " + inst_.id + " needs list param '" + key + "'");
    return inst_.params.at(key).get<std::vector<double>>();
}

Eigen::MatrixXd InstanceView::matrix(const std::string& key) const {
    if (!has(key)) throw InputError("instance " + inst_.id + " needs matrix param '" + key + "'");
    return matrix_from_json(inst_.params.at(key));
}

std::string InstanceView::text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    return inst_.params.at(key).get<std::string>();
}

CheckRegistry& CheckRegistry::global() {
    static CheckRegistry reg = [] {
        CheckRegistry r;
        register_univariate_checks(r);
        register_bound_checks(r);
        register_multivariate_checks(r);
        register_maxent_checks(r);
        return r;
    }();
    return reg;
}

void CheckRegistry::add(const std::string& id, CheckFn fn) { fns_[id] = std::move(fn); }

bool CheckRegistry::contains(const std::string& id) const { return fns_.count(id) > 0; }

const CheckFn& CheckRegistry::get(const std::string& id) const {
    const auto it = fns_.find(id);
    if (it == fns_.end()) throw InputError("unknown check_id '" + id + "'");
    return it->second;
}

std::vector<std::string> CheckRegistry::ids() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : fns_) out.push_back(k);
    return out;
}

CheckReport run_check(const CheckInstance& inst) {
    auto failed = [&](Verdict v, const std::string& why) {
        CheckReport r;
        r.check_id = inst.check_id;
        r.instance_id = inst.id;
        r.verdict = v;
        r.lhs = r.rhs = r.slack = NAN;
        r.notes.push_back(why);
        return r;
    };
    try {
        const auto& fn = CheckRegistry::global().get(inst.check_id);
        return fn(InstanceView(inst));
    } catch (const DivergenceError& e) {
        auto r = failed(Verdict::divergent, e.what());
        r.diagnostics.emplace_back("value_at_cut", e.value_at_cut());
        r.diagnostics.emplace_back("tail_increment", e.increment());
        return r;
    } catch (const ConvergenceError& e) {
        auto r = failed(Verdict::error, std::string("quadrature: ") + e.what());
        r.diagnostics.emplace_back("best_estimate", e.best_estimate());
        r.diagnostics.emplace_back("abs_error", e.abs_error());
        return r;
    } catch (const std::exception& e) {
        return failed(Verdict::error, e.what());
    }
}

std::vector<CheckReport> run_suite(const std::vector<CheckInstance>& instances, int jobs) {
    std::vector<CheckReport> out(instances.size());
    CheckRegistry::global();  // build before threads start
    if (jobs <= 1 || instances.size() < 2) {
        for (std::size_t i = 0; i < instances.size(); ++i) out[i] = run_check(instances[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(jobs), instances.size());
    for (std::size_t t = 0; t < n; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < instances.size(); i = next++) out[i] = run_check(instances[i]);
        });
    for (auto& th : pool) th.join();
    return out;
}

SuiteSummary summarize(const std::vector<CheckReport>& reports) {
    SuiteSummary s;
    for (const auto& r : reports) {
        ++s.per_check[r.check_id][verdict_name(r.verdict)];
        ++s.totals[verdict_name(r.verdict)];
    }
    return s;
}

std::vector<std::string> all_check_ids() { return CheckRegistry::global().ids(); }

}  // namespace wcre

#include "wcre/empirical.hpp"
#include "wcre/entropy.hpp"
#include "wcre/entropy_multivariate.hpp"
#include "wcre/errors.hpp"
#include "wcre/harness.hpp"
#include "wcre/json_io.hpp"
#include "wcre/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace wcre;

namespace {

// pinned tolerances
constexpr double oracle_tol = 1e-6;
constexpr double identity_tol = 1e-6;
constexpr double gibbs_tol = 1e-8;
constexpr double gibbs_equal_tol = 1e-10;
constexpr double mutual_tol = 1e-6;
constexpr double decomp_tol = 1e-5;
constexpr double equality_grid_tol = 1e-5;
constexpr double bound_tol = 1e-8;
constexpr double mc_se = 3.0;
constexpr double ky_fan_tol = 1e-8;
constexpr double hadamard_tol = 1e-6;
constexpr double convergence_max_err = 0.02;

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void criterion(int k, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = secs < budget_s;
    const bool ok = o.ok && in_time;
    if (!ok) ++failures;
    std::printf("criterion %d %s: %s (%s; %.2fs of %.0fs)\n", k, title.c_str(), ok ? "PASS" : "FAIL", o.detail.c_str(),
                secs, budget_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

WeightFunction one() { return WeightFunction::constant(1.0); }

CheckInstance instance(const std::string& check, json models, json weight, json params = json::object()) {
    CheckInstance c;
    c.id = check;
    c.check_id = check;
    c.models = std::move(models);
    c.weight = std::move(weight);
    c.params = std::move(params);
    return c;
}

Outcome oracles() {
    const auto e1 = UnivariateModel::exponential(1), u = UnivariateModel::uniform(0, 1);
    const double got[5] = {wcre::wcre(e1, one()).value, wcre::wcre(e1, WeightFunction::power(1)).value,
                           wcre::wcre(u, one()).value, wce(u, one()).value, wce(e1, one()).value};
    const double want[5] = {1.0, 2.0, 0.25, 0.25, M_PI * M_PI / 6 - 1};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    return {worst <= oracle_tol, fmt("max abs error %.2e", worst)};
}

Outcome identities() {
    const std::vector<UnivariateModel> ms = {UnivariateModel::uniform(0, 1),   UnivariateModel::uniform(0.5, 2),
                                             UnivariateModel::exponential(1), UnivariateModel::exponential(2.5),
                                             UnivariateModel::weibull(1, 2),  UnivariateModel::weibull(0.7, 0.8),
                                             UnivariateModel::gamma(2, 0.5),  UnivariateModel::gamma(0.6, 1.5)};
    int n = 0;
    double worst = 0.0;
    for (const auto& m : ms)
        for (const auto& w : {one(), WeightFunction::power(1)}) {
            const double e = wcre::wcre(m, w).value, c = wce(m, w).value;
            worst = std::max({worst, std::abs(e - wcre_via_mean(m, w)), std::abs(c - wce_via_mean(m, w)),
                              std::abs(e - survival_identity_value(m, w))});
            ++n;
        }
    return {worst <= identity_tol && n >= 12, fmt("%.0f combinations, max deviation %.2e", n, worst)};
}

UnivariateModel random_model(CounterRng& rng) {
    switch (rng.below(4)) {
        case 0: return UnivariateModel::exponential(0.3 + 3 * rng.uniform());
        case 1: return UnivariateModel::weibull(0.3 + 2 * rng.uniform(), 0.6 + 2.5 * rng.uniform());
        case 2: return UnivariateModel::gamma(0.5 + 3 * rng.uniform(), 0.3 + 2 * rng.uniform());
        default: return UnivariateModel::uniform(0, 0.5 + 3 * rng.uniform());
    }
}

Outcome gibbs() {
    CounterRng rng(0, 7);
    int asserted = 0, violations = 0, undefined = 0;
    double worst = INFINITY;
    for (int i = 0; i < 200; ++i) {
        const auto f = random_model(rng), g = random_model(rng);
        const auto w = rng.below(2) ? one() : WeightFunction::power(1);
        if (g.support_hi() < f.support_hi()) {
            ++undefined;
            continue;
        }
        if (sf_gap_integral(f, g, w) < 0) continue;
        ++asserted;
        const double d = relative_wcre(f, g, w);
        worst = std::min(worst, d);
        if (d < -gibbs_tol) ++violations;
    }
    double eq = 0.0;
    CounterRng r2(0, 8);
    for (int i = 0; i < 20; ++i) {
        const auto f = random_model(r2);
        eq = std::max(eq, std::abs(relative_wcre(f, f, one())));
    }
    return {violations == 0 && eq <= gibbs_equal_tol,
            fmt("%.0f asserted of 200 (%.0f with G's support too short), %.0f violations, min D %.2e", asserted,
                undefined, violations, worst) +
                fmt(", equality |D| %.1e", eq)};
}

Outcome multivariate(const std::vector<CheckReport>& suite) {
    const auto e = [](double l) { return UnivariateModel::exponential(l); };
    double tau = 0.0;
    for (const auto& m : {MultivariateModel::independent({e(1), e(2)}),
                          MultivariateModel::independent({UnivariateModel::uniform(0, 1), UnivariateModel::gamma(2, 1)})})
        tau = std::max(tau, std::abs(mutual_wcre(m, JointWeight::constant(1)).value));
    double dec = 0.0;
    for (const auto& m : {MultivariateModel::independent({e(1), e(2)}),
                          MultivariateModel::independent({UnivariateModel::uniform(0, 1), e(1)}),
                          MultivariateModel::independent({UnivariateModel::weibull(1, 2), UnivariateModel::gamma(2, 0.5)})}) {
        const auto w = JointWeight::product({WeightFunction::power(1), one()});
        dec = std::max(dec, std::abs(independent_decomposition(m, w).total - joint_wcre(m, w).value));
    }
    int pass = 0, other = 0;
    double eq = 0.0;
    for (const auto& r : suite) {
        if (r.check_id != "SUBADD" && r.check_id != "STRONG_SUBADD") continue;
        if (r.verdict == Verdict::pass) ++pass;
        else if (r.verdict != Verdict::hypothesis_not_met) ++other;
        if (r.instance_id == "subadd_independent" || r.instance_id == "strong_subadd_markov")
            eq = std::max(eq, std::abs(r.slack));
    }
    const bool ok = tau <= mutual_tol && dec <= decomp_tol && other == 0 && pass >= 4 && eq <= equality_grid_tol;
    return {ok, fmt("max |tau| %.1e, decomposition gap %.1e, %.0f PASS, equality |slack| %.1e", tau, dec, pass, eq)};
}

Outcome bounds() {
    const std::vector<std::pair<UnivariateModel, WeightFunction>> pairs = {
        {UnivariateModel::exponential(1), one()},
        {UnivariateModel::exponential(2), WeightFunction::power(1)},
        {UnivariateModel::uniform(0, 2), one()},
        {UnivariateModel::uniform(0, 1), WeightFunction::power(2)},
        {UnivariateModel::weibull(1, 2), one()},
        {UnivariateModel::gamma(2, 0.5), WeightFunction::exponential(1)},
        {UnivariateModel::gamma(0.6, 1.5), WeightFunction::power(0.5)},
        {UnivariateModel::weibull(0.7, 0.8), WeightFunction::scaled_power(2, 1)}};
    int v = 0, n = 0;
    for (const auto& [m, w] : pairs) {
        const double e = wcre::wcre(m, w).value;
        n += 5;
        if (e < alpha_phi(m, w).value * std::exp(shannon_entropy(m)) - bound_tol) ++v;
        const auto g = gini_psi_statistic(m, w, {}, 100000, 0);
        const auto c = gini_centered_statistic(m, w, {}, 100000, 0);
        if (2 * e < g.value - mc_se * g.std_error) ++v;
        if (2 * e < c.value - mc_se * c.std_error) ++v;
        const auto f = fenchel_upper_bound(m, w, {}, 100000, 0);
        if (e > f.value + mc_se * f.std_error) ++v;
        const auto l = log_plus_moment_bound(m, w);
        if (l.lhs > l.rhs + bound_tol) ++v;
    }
    return {v == 0, fmt("%.0f inequalities on 8 pairs, %.0f violations", n, v)};
}

Outcome maxent(const std::vector<CheckReport>& suite) {
    int exp_pass = 0;
    for (const auto& m : {json{{"family", "uniform"}, {"a", 0}, {"b", 2}},
                          json{{"family", "weibull"}, {"lambda", 1}, {"q", 2}},
                          json{{"family", "gamma"}, {"k", 2}, {"theta", 0.5}}})
        if (run_check(instance("MAX_EXP", {m}, {{"kind", "constant"}, {"c", 1}})).verdict == Verdict::pass) ++exp_pass;

    int wb_pass = 0, wb_bad = 0;
    for (const auto& r : suite)
        if (r.check_id == "MAX_WEIBULL") {
            if (r.verdict == Verdict::pass) ++wb_pass;
            else if (r.verdict != Verdict::hypothesis_not_met) ++wb_bad;
        }

    CounterRng rng(0, 42);
    auto spd = [&] {
        Eigen::Matrix2d a;
        for (int i = 0; i < 4; ++i) a(i / 2, i % 2) = rng.normal();
        Eigen::Matrix2d c = a * a.transpose() + 0.1 * Eigen::Matrix2d::Identity();
        return json{{c(0, 0), c(0, 1)}, {c(1, 0), c(1, 1)}};
    };
    int kf_asserted = 0, kf_fail = 0, kf_raw = 0;
    for (int i = 0; i < 20; ++i) {
        auto inst = instance("KY_FAN", json::array(), {{"kind", "constant"}, {"c", 1}},
                             {{"C1", spd()}, {"C2", spd()}, {"lambda1", 0.1 + 0.8 * rng.uniform()}});
        inst.spec.grid_points_per_dim = 128;
        const auto r = run_check(inst);
        if (r.hypothesis_met) ++kf_asserted;
        if (r.verdict == Verdict::fail || r.verdict == Verdict::error) ++kf_fail;
        if (r.slack < -ky_fan_tol) ++kf_raw;
    }

    const auto h = run_check(instance("HADAMARD", {{{"family", "mvgaussian"}, {"cov", {{1.0, 0.0}, {0.0, 2.0}}}}},
                                      {{"kind", "constant"}, {"c", 1}}));
    const double hs = std::abs(h.slack);

    const bool ok = exp_pass == 3 && wb_pass >= 2 && wb_bad == 0 && kf_fail == 0 && h.verdict == Verdict::pass &&
                    hs <= hadamard_tol;
    return {ok, fmt("MAX_EXP %.0f/3, MAX_WEIBULL %.0f PASS, ", exp_pass, wb_pass) +
                    fmt("KY_FAN 20 pairs: %.0f with hypotheses met, %.0f FAIL, %.0f with slack < -1e-8 regardless of "
                        "hypotheses, ",
                        kf_asserted, kf_fail, kf_raw) +
                    fmt("HADAMARD diagonal |slack| %.1e", hs)};
}

Outcome convergence() {
    const auto rows = convergence_experiment(UnivariateModel::exponential(1), one(), {100, 10000}, 50, 0);
    const bool ok = rows[1].mean_abs_err < convergence_max_err && rows[1].mean_abs_err < rows[0].mean_abs_err;
    return {ok, fmt("mean abs error %.4f at n=100, %.4f at n=10000", rows[0].mean_abs_err, rows[1].mean_abs_err)};
}

Outcome full_suite(const std::vector<CheckReport>& first) {
    const auto second = run_suite(default_catalog(), 1);
    const std::string a = dump(reports_to_json(first)), b = dump(reports_to_json(second));
    const auto s = summarize(first);
    auto count = [&](const char* v) {
        auto it = s.totals.find(v);
        return it == s.totals.end() ? 0 : it->second;
    };
    const int fails = count("FAIL"), errors = count("ERROR");
    return {fails == 0 && errors == 0 && a == b,
            fmt("%.0f instances, %.0f FAIL, %.0f ERROR, ", double(first.size()), fails, errors) +
                (a == b ? "JSON byte-identical across runs" : "JSON differs between runs")};
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    const auto suite = run_suite(default_catalog(), 1);
    const double suite_s = std::chrono::duration<double>(Clock::now() - t0).count();

    criterion(1, "closed-form oracles", 5, oracles);
    criterion(2, "identities", 30, identities);
    criterion(3, "Gibbs inequality", 120, gibbs);
    criterion(4, "multivariate", 120, [&] { return multivariate(suite); });
    criterion(5, "bounds", 60, bounds);
    criterion(6, "maximum entropy", 300, [&] { return maxent(suite); });
    criterion(7, "empirical convergence", 120, convergence);
    criterion(8, "default suite", 600 - suite_s, [&] { return full_suite(suite); });
    return failures == 0 ? 0 : 1;
}

#include "wcre/harness.hpp"
#include "wcre/json_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <string>

using namespace wcre;

namespace {

CheckInstance make(const std::string& check, json models, json weight, json params = json::object()) {
    CheckInstance c;
    c.id = check;
    c.check_id = check;
    c.models = std::move(models);
    c.weight = std::move(weight);
    c.params = std::move(params);
    return c;
}

json expo(double l) { return {{"family", "exponential"}, {"lambda", l}}; }
json unif(double a, double b) { return {{"family", "uniform"}, {"a", a}, {"b", b}}; }
json constant(double c = 1.0) { return {{"kind", "constant"}, {"c", c}}; }

const std::vector<CheckReport>& default_reports() {
    static const auto r = run_suite(default_catalog(), 1);
    return r;
}

json doubled_weight(const json& w) {
    json out = w;
    if (w.value("kind", "") == "product") {
        out["scale"] = w.value("scale", 1.0) * 2.0;
        return out;
    }
    return weight_to_json(weight_from_json(w).scaled(2.0));
}

}  // namespace

TEST(RunCheck, GibbsExample) {
    const auto r = run_check(make("GIBBS", {expo(1), expo(2)}, constant()));
    ASSERT_EQ(r.hypotheses.size(), 1u);
    EXPECT_NEAR(r.hypotheses[0].value, 0.5, 1e-9);
    EXPECT_NEAR(r.lhs, 0.0, 1e-15);
    EXPECT_NEAR(r.rhs, 1.0, 1e-9);
    EXPECT_EQ(r.verdict, Verdict::pass);
}

TEST(RunCheck, GibbsEquality) {
    const auto r = run_check(make("GIBBS", {expo(1.3), expo(1.3)}, constant()));
    EXPECT_EQ(r.verdict, Verdict::pass);
    EXPECT_LE(std::abs(r.slack), 1e-10);
}

TEST(RunCheck, GibbsHypothesisNotMet) {
    const auto r = run_check(make("GIBBS", {expo(2), expo(1)}, constant()));
    EXPECT_EQ(r.verdict, Verdict::hypothesis_not_met);
    EXPECT_FALSE(r.hypothesis_met);
    for (const auto& c : r.conclusions) EXPECT_FALSE(c.asserted);
}

TEST(RunCheck, SubaddIndependentEquality) {
    json m = {{"family", "independent"}, {"marginals", {expo(1), expo(1)}}};
    const auto r = run_check(make("SUBADD", {m}, constant()));
    EXPECT_EQ(r.verdict, Verdict::pass);
    for (const auto& c : r.conclusions) EXPECT_LE(std::abs(c.slack), 1e-6) << c.name;
}

TEST(RunCheck, MaxExpUniform) {
    const auto r = run_check(make("MAX_EXP", {unif(0, 2)}, constant()));
    EXPECT_EQ(r.verdict, Verdict::pass);
    EXPECT_NEAR(r.lhs, 0.5, 1e-8);
    EXPECT_NEAR(r.rhs, 1.0, 1e-8);
}

TEST(RunCheck, HadamardDiagonalEquality) {
    json m = {{"family", "mvgaussian"}, {"cov", {{1.0, 0.0}, {0.0, 3.0}}}};
    const auto r = run_check(make("HADAMARD", {m}, constant()));
    EXPECT_EQ(r.verdict, Verdict::pass);
    EXPECT_LE(std::abs(r.slack), 1e-6);
}

TEST(RunCheck, DivergentEntropy) {
    const auto r = run_check(make("FINITENESS", {{{"family", "lomax"}, {"alpha", 0.8}}}, constant(), {{"p", 0.5}, {"alpha", 0.5}, {"a", 1}}));
    EXPECT_EQ(r.verdict, Verdict::divergent);
}

TEST(RunCheck, UnknownCheckIsError) {
    const auto r = run_check(make("NOT_A_CHECK", json::array(), constant()));
    EXPECT_EQ(r.verdict, Verdict::error);
    EXPECT_FALSE(r.notes.empty());
}

TEST(RunCheck, ArityMismatchIsError) {
    const auto r = run_check(make("GIBBS", {expo(1)}, constant()));
    EXPECT_EQ(r.verdict, Verdict::error);
}

TEST(RunSuite, EmptyAndOrdered) {
    EXPECT_TRUE(run_suite({}, 2).empty());
    std::vector<CheckInstance> v;
    for (int i = 0; i < 6; ++i) {
        auto c = make("GIBBS", {expo(1 + i), expo(2)}, constant());
        c.id = "g" + std::to_string(i);
        v.push_back(c);
    }
    const auto a = run_suite(v, 1), b = run_suite(v, 3);
    ASSERT_EQ(a.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        EXPECT_EQ(a[i].instance_id, v[i].id);
        EXPECT_EQ(dump(report_to_json(a[i])), dump(report_to_json(b[i])));
    }
}

TEST(RunSuite, DuplicateInstanceIsBitIdentical) {
    const auto c = make("GINI_LB", {expo(1)}, constant(), {{"n_mc", 20000}});
    const auto r = run_suite({c, c}, 2);
    EXPECT_EQ(dump(report_to_json(r[0])), dump(report_to_json(r[1])));
}

TEST(Report, VerdictInvariants) {
    for (const auto& r : default_reports()) {
        if (r.verdict == Verdict::fail) EXPECT_LT(r.slack, -r.tolerance) << r.instance_id;
        if (r.verdict == Verdict::hypothesis_not_met) {
            EXPECT_FALSE(r.hypothesis_met) << r.instance_id;
            bool any_unmet = false;
            for (const auto& c : r.conclusions) any_unmet = any_unmet || !c.asserted;
            EXPECT_TRUE(any_unmet) << r.instance_id;
        }
        if (r.verdict == Verdict::pass)
            for (const auto& c : r.conclusions)
                if (c.asserted) EXPECT_GE(c.slack, -c.tolerance) << r.instance_id << " " << c.name;
    }
}

TEST(Report, JsonRoundTrip) {
    const auto j = reports_to_json(default_reports());
    EXPECT_EQ(dump(json::parse(dump(j))), dump(j));
}

TEST(Catalog, EveryCheckHasAnInstance) {
    std::set<std::string> seen;
    for (const auto& c : default_catalog()) seen.insert(c.check_id);
    for (const auto& id : all_check_ids()) EXPECT_TRUE(seen.count(id)) << id;
}

TEST(Catalog, NoFail) {
    for (const auto& r : default_reports()) {
        EXPECT_NE(r.verdict, Verdict::fail) << r.instance_id;
        EXPECT_NE(r.verdict, Verdict::error) << r.instance_id;
    }
}

TEST(Catalog, EqualityInstancesAreTight) {
    const std::map<std::string, std::string> eq = {{"gibbs_equal", "GIBBS"},
                                                   {"subadd_independent", "SUBADD"},
                                                   {"hadamard_diag", "HADAMARD"},
                                                   {"strong_subadd_markov", "STRONG_SUBADD"},
                                                   {"ky_fan_equal", "KY_FAN"},
                                                   {"marginal_subadd_gauss_diag", "MARGINAL_SUBADD"}};
    std::set<std::string> found;
    for (const auto& r : default_reports()) {
        auto it = eq.find(r.instance_id);
        if (it == eq.end()) continue;
        found.insert(r.instance_id);
        EXPECT_EQ(r.check_id, it->second);
        EXPECT_EQ(r.verdict, Verdict::pass) << r.instance_id;
        EXPECT_LE(std::abs(r.slack), 10 * r.tolerance) << r.instance_id;
    }
    EXPECT_EQ(found.size(), eq.size());
}

TEST(Catalog, HypothesisNotMetExercised) {
    std::map<std::string, int> hyp, hnm;
    for (const auto& r : default_reports()) {
        if (!r.hypotheses.empty()) ++hyp[r.check_id];
        if (r.verdict == Verdict::hypothesis_not_met) ++hnm[r.check_id];
    }
    // conditional nonnegativity holds on every FGM pair, so its hypothesis cannot be violated there
    const std::set<std::string> structural = {"COND_NONNEG", "COND_DPI", "DECOMP", "GINI_LB", "REL_DPI", "REL_CONVEX"};
    for (const auto& [id, n] : hyp)
        if (!structural.count(id)) EXPECT_GT(hnm[id], 0) << id;
}

TEST(Catalog, WeightScalingKeepsVerdicts) {
    auto cat = default_catalog();
    for (auto& c : cat) c.weight = doubled_weight(c.weight);
    const auto scaled = run_suite(cat, 1);
    const auto& base = default_reports();
    ASSERT_EQ(scaled.size(), base.size());
    // hypotheses that are not homogeneous in phi: phi >= 1, phi <= 1, and lambda = 1 / E psi(X)
    const std::set<std::string> inhomogeneous = {"CROSS_LB", "MAX_WEIBULL", "MAX_EXP"};
    for (std::size_t i = 0; i < base.size(); ++i)
        if (!inhomogeneous.count(base[i].check_id))
            EXPECT_EQ(verdict_name(scaled[i].verdict), verdict_name(base[i].verdict)) << base[i].instance_id;
}

TEST(Catalog, ChainStubsAreUnimplemented) {
    int n = 0;
    for (const auto& r : default_reports())
        if (r.check_id.rfind("CHAIN_", 0) == 0) {
            EXPECT_EQ(r.verdict, Verdict::unimplemented);
            ++n;
        }
    EXPECT_EQ(n, 4);
}

// pairs where every Ky Fan hypothesis holds and the conclusion does not
TEST(KyFan, DocumentedCounterexamples) {
    const auto cat = catalog_from_json(read_json_file(std::string(WCRE_DATA_DIR) + "/ky_fan_counterexamples.json"));
    ASSERT_FALSE(cat.empty());
    for (const auto& r : run_suite(cat, 1)) {
        EXPECT_TRUE(r.hypothesis_met) << r.instance_id;
        EXPECT_EQ(r.verdict, Verdict::fail) << r.instance_id;
        EXPECT_LT(r.slack, -1e-3) << r.instance_id;
    }
}

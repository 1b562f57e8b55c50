#include "wcre/empirical.hpp"
#include "wcre/entropy.hpp"
#include "wcre/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <sstream>

using namespace wcre;

namespace {

WeightFunction one() { return WeightFunction::constant(1.0); }

// piecewise sum written out directly
double brute_wcre(std::vector<double> x, const WeightFunction& w) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double sf = (n - static_cast<double>(i)) / n;
        s += -sf * std::log(sf) * (w.psi(x[i]) - w.psi(x[i - 1]));
    }
    return s;
}

}  // namespace

TEST(EmpiricalWcre, Examples) {
    EXPECT_NEAR(empirical_wcre({1, 2}, one()).value, brute_wcre({1, 2}, one()), 1e-15);
    EXPECT_NEAR(empirical_wcre({1, 2}, one()).value, 0.5 * std::log(2.0), 1e-15);
    EXPECT_EQ(empirical_wcre({3.0}, one()).value, 0.0);
    EXPECT_EQ(empirical_wcre({3.0}, WeightFunction::power(2)).value, 0.0);
    EXPECT_NEAR(empirical_wcre({1, 2}, WeightFunction::power(1)).value, 0.75 * std::log(2.0), 1e-15);
}

TEST(EmpiricalWce, Examples) {
    EXPECT_NEAR(empirical_wce({1, 2}, one()).value, 0.5 * std::log(2.0), 1e-15);
    EXPECT_EQ(empirical_wce({0.7}, one()).value, 0.0);
    EXPECT_NEAR(empirical_wce({1, 2, 3}, one()).value, -(std::log(1.0 / 3) / 3 + 2 * std::log(2.0 / 3) / 3), 1e-15);
}

TEST(Empirical, NegativeEntryRejected) {
    EXPECT_THROW(empirical_wcre({1, -2}, one()), DomainError);
    EXPECT_THROW(empirical_wcre({}, one()), DomainError);
}

TEST(Empirical, PiecesBounded) {
    const auto s = UnivariateModel::gamma(2, 1).sample_n(200, 1, 0);
    const auto e = empirical_wcre(s, one());
    EXPECT_EQ(e.n, 200u);
    EXPECT_LE(e.pieces, e.n + 1);
    EXPECT_GE(e.value, 0.0);
    EXPECT_NEAR(e.value, brute_wcre(s, one()), 1e-12);
}

TEST(Empirical, BootstrapIntervalDeterministic) {
    const auto s = UnivariateModel::exponential(1).sample_n(300, 2, 0);
    BootstrapOptions b;
    b.replicates = 200;
    b.seed = 4;
    const auto a = empirical_wcre(s, one(), 0.9, b), c = empirical_wcre(s, one(), 0.9, b);
    ASSERT_TRUE(a.bootstrap_ci.has_value());
    EXPECT_EQ(a.bootstrap_ci->first, c.bootstrap_ci->first);
    EXPECT_EQ(a.bootstrap_ci->second, c.bootstrap_ci->second);
    EXPECT_LT(a.bootstrap_ci->first, a.bootstrap_ci->second);
    EXPECT_DOUBLE_EQ(a.level, 0.9);
}

TEST(Convergence, ExponentialTable) {
    const auto rows = convergence_experiment(UnivariateModel::exponential(1), one(), {100, 1000, 10000}, 50, 0);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_GT(rows[0].mean_abs_err, rows[1].mean_abs_err);
    EXPECT_GT(rows[1].mean_abs_err, rows[2].mean_abs_err);
    EXPECT_LT(rows[2].mean_abs_err, 0.02);
    EXPECT_TRUE(convergence_monotone(rows));
}

TEST(Convergence, NearPointMass) {
    for (const auto& r : convergence_experiment(UnivariateModel::uniform(0, 1e-9), one(), {10, 100}, 5, 0))
        EXPECT_LT(r.mean_abs_err, 1e-9);
}

TEST(Convergence, PowerWeight) {
    const auto rows = convergence_experiment(UnivariateModel::exponential(1), WeightFunction::power(1), {1000, 10000}, 20, 0);
    EXPECT_GT(rows[0].mean_abs_err, rows[1].mean_abs_err);
}

TEST(Convergence, DivergentTargetRefused) {
    EXPECT_THROW(convergence_experiment(UnivariateModel::lomax(0.8, 1), one(), {10}, 2, 0), DivergenceError);
}

TEST(Convergence, MonotoneAllowsOneSmallInversion) {
    EXPECT_TRUE(convergence_monotone({{10, 0.3, 0.1}, {100, 0.35, 0.1}, {1000, 0.1, 0.05}}));
    EXPECT_FALSE(convergence_monotone({{10, 0.3, 0.01}, {100, 0.5, 0.01}, {1000, 0.1, 0.05}}));
    EXPECT_FALSE(convergence_monotone({{10, 0.3, 0.1}, {100, 0.35, 0.1}, {1000, 0.4, 0.1}}));
}

TEST(EmpiricalProperty, QuantileLatticeConverges) {
    const auto m = UnivariateModel::exponential(1);
    const double exact = wcre::wcre(m, one()).value;
    const double e1 = std::abs(empirical_wcre(quantile_lattice(m, 1000), one()).value - exact);
    const double e4 = std::abs(empirical_wcre(quantile_lattice(m, 4000), one()).value - exact);
    EXPECT_LE(e4, 0.5 * e1);
}

TEST(EmpiricalProperty, ScaleEquivariance) {
    auto s = UnivariateModel::gamma(1.5, 1).sample_n(500, 3, 0);
    const double base = empirical_wcre(s, one()).value;
    for (double c : {0.5, 2.0, 8.0}) {
        auto t = s;
        for (auto& x : t) x *= c;
        EXPECT_NEAR(empirical_wcre(t, one()).value, c * base, 1e-12 * c * base);
    }
}

TEST(EmpiricalProperty, TiesContributeNothing) {
    EXPECT_NEAR(empirical_wcre({1, 2, 2, 2, 5}, one()).value, brute_wcre({1, 2, 2, 2, 5}, one()), 1e-15);
    EXPECT_NEAR(empirical_wce({0, 0, 3}, WeightFunction::power(1)).value,
                -(2.0 / 3) * std::log(2.0 / 3) * 4.5, 1e-14);
}

// spec asks for >= 90 of 100 trials covering the model value
TEST(EmpiricalProperty, BootstrapCoverage) {
    const auto m = UnivariateModel::exponential(1);
    int covered = 0;
    BootstrapOptions b;
    b.replicates = 1000;
    for (std::uint64_t t = 0; t < 100; ++t) {
        b.seed = t;
        const auto e = empirical_wcre(m.sample_n(1000, 100 + t, 0), one(), 0.95, b);
        if (e.bootstrap_ci->first <= 1.0 && 1.0 <= e.bootstrap_ci->second) ++covered;
    }
    EXPECT_GE(covered, 90);
}

TEST(SampleCsv, ParsesCommentsAndHeader) {
    std::istringstream in("value\n# note\n1.5\n\n2\n");
    EXPECT_EQ(read_sample_csv(in), (std::vector<double>{1.5, 2.0}));
}

TEST(SampleCsv, BadRowNamesLine) {
    std::istringstream in("1\n2\nabc\n");
    try {
        read_sample_csv(in);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
    }
}

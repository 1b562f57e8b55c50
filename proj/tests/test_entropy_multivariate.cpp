#include "oracle.hpp"

#include "wcre/entropy_multivariate.hpp"
#include "wcre/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace wcre;

namespace {

UnivariateModel ex(double l) { return UnivariateModel::exponential(l); }
UnivariateModel un() { return UnivariateModel::uniform(0, 1); }
JointWeight one() { return JointWeight::constant(1.0); }

}  // namespace

TEST(JointWcre, IndependentExponentials) {
    const auto m = MultivariateModel::independent({ex(1), ex(1)});
    const double g2 = oracle::on_half_line([](double x) { return x * std::exp(-x); });
    const double g0 = oracle::on_half_line([](double x) { return std::exp(-x); });
    EXPECT_NEAR(joint_wcre(m, one()).value, 2 * g2 * g0, 1e-6);
}

TEST(JointWcre, FgmThetaZeroMatchesProduct) {
    const auto a = MultivariateModel::fgm(0.0, un(), un());
    const auto b = MultivariateModel::independent({un(), un()});
    EXPECT_NEAR(joint_wcre(a, one()).value, joint_wcre(b, one()).value, 1e-12);
}

TEST(JointWcre, PointMassFactor) {
    const auto m = MultivariateModel::independent({UnivariateModel::point_mass(1.0), ex(1)});
    // sf is sf_2 on [0, 1) in x1 and 0 beyond
    EXPECT_NEAR(joint_wcre(m, one()).value, 1.0, 1e-6);
    const auto w = joint_wce(m, one());
    EXPECT_GE(w.value, 0.0);
}

TEST(JointWce, IndependentUniforms) {
    const auto m = MultivariateModel::independent({un(), un()});
    const double ref = oracle::on_interval(
        [](double x) { return oracle::on_interval([x](double y) { return oracle::eta(x * y); }, 0, 1); }, 0, 1);
    EXPECT_NEAR(joint_wce(m, one()).value, ref, 1e-6);
    EXPECT_NEAR(ref, 0.25, 1e-9);
}

TEST(JointWce, FgmRegressionAgreesAcrossGrids) {
    const auto m = MultivariateModel::fgm(0.5, un(), un());
    QuadratureSpec full, half;
    half.grid_points_per_dim = full.grid_points_per_dim / 2;
    EXPECT_NEAR(joint_wce(m, one(), full).value, joint_wce(m, one(), half).value, 1e-5);
}

TEST(ConditionalWcre, IndependentExponentials) {
    const auto m = MultivariateModel::independent({ex(1), ex(1)});
    EXPECT_NEAR(conditional_wcre(m, one()).value, 1.0, 1e-6);
}

TEST(ConditionalWcre, FgmNonnegative) {
    EXPECT_GE(conditional_wcre(MultivariateModel::fgm(0.5, un(), un()), one()).value, 0.0);
}

TEST(MutualWcre, Examples) {
    for (const auto& m : {MultivariateModel::independent({ex(1), ex(2)}), MultivariateModel::independent({un(), ex(1)}),
                          MultivariateModel::independent({ex(1), un(), ex(3)})}) {
        QuadratureSpec s;
        s.grid_points_per_dim = m.dim() == 3 ? 64 : 256;
        EXPECT_NEAR(mutual_wcre(m, one(), s).value, 0.0, 1e-6);
    }
    const auto f = MultivariateModel::fgm(0.9, un(), un());
    const double t = mutual_wcre(f, one()).value;
    EXPECT_GT(t, 0.0);
    EXPECT_NEAR(mutual_wcre(f, JointWeight::constant(2.0)).value, 2 * t, 1e-14);
}

TEST(DerivedWeight, Examples) {
    const auto m = MultivariateModel::independent({ex(1), ex(1)});
    const auto d = derived_weight(m, one(), {Reduction::Kind::psi_i, 1, 0});
    for (double v : d.weight.values) EXPECT_NEAR(v, 1.0, 1e-8);
    const auto z = derived_weight(m, JointWeight::constant(0.0), {Reduction::Kind::psi_i, 0, 1});
    for (double v : z.weight.values) EXPECT_EQ(v, 0.0);
}

TEST(DerivedWeight, MatchesOneDimensionalIntegral) {
    // psi_2(x2) = int phi sf(x1, x2) / sf2(x2) dx1 for the fgm pair
    const double th = 0.6;
    const auto m = MultivariateModel::fgm(th, ex(1), ex(2));
    QuadratureSpec s;
    s.grid_points_per_dim = 128;
    SurvivalGrid g(m, s);
    const auto d = reduce_weight(g, weight_tensor(g, one()), 2u);
    for (int j : {3, 40, 90}) {
        const double x2 = g.node(1, j);
        const double ref = oracle::on_half_line([&](double x1) { return m.conditional_sf(x1, x2); });
        SurvivalGrid::Index idx{0, j, 0};
        EXPECT_NEAR(d.at(g, idx), ref, 1e-6) << x2;
    }
}

TEST(Decomposition, Examples) {
    const auto d = independent_decomposition(MultivariateModel::independent({ex(1), ex(1)}), one());
    ASSERT_EQ(d.parts.size(), 2u);
    EXPECT_NEAR(d.parts[0], 1.0, 1e-8);
    EXPECT_NEAR(d.parts[1], 1.0, 1e-8);
    EXPECT_NEAR(d.total, 2.0, 1e-8);
    const auto m = MultivariateModel::independent({ex(1), ex(2)});
    const auto e = independent_decomposition(m, one());
    EXPECT_NEAR(e.parts[0], 0.5, 1e-8);
    EXPECT_NEAR(e.parts[1], 0.5, 1e-8);
    EXPECT_NEAR(e.total, joint_wcre(m, one()).value, 1e-5);
    const auto w0 = JointWeight::product({WeightFunction::constant(0), WeightFunction::constant(1)});
    const auto z = independent_decomposition(m, w0);
    EXPECT_EQ(z.total, 0.0);
}

TEST(Decomposition, RejectsDependentModel) {
    EXPECT_THROW(independent_decomposition(MultivariateModel::fgm(0.5, ex(1), ex(1)), one()), DomainError);
}

TEST(MultivariateProperty, MutualZeroOnProducts) {
    const std::vector<std::vector<UnivariateModel>> ms = {
        {ex(1), ex(1)}, {un(), UnivariateModel::gamma(2, 1)}, {UnivariateModel::weibull(1, 2), ex(0.5)}};
    for (const auto& parts : ms)
        for (const auto& w : {one(), JointWeight::product({WeightFunction::power(1), WeightFunction::constant(1)})})
            EXPECT_LE(std::abs(mutual_wcre(MultivariateModel::independent(parts), w).value), 1e-6);
}

TEST(MultivariateProperty, DecompositionMatchesGrid) {
    const std::vector<std::vector<UnivariateModel>> ms = {
        {ex(1), ex(2)}, {un(), UnivariateModel::gamma(2, 1)}, {UnivariateModel::weibull(1, 2), ex(0.5)}};
    const auto w = JointWeight::product({WeightFunction::power(1), WeightFunction::constant(2)});
    for (const auto& parts : ms) {
        const auto m = MultivariateModel::independent(parts);
        EXPECT_NEAR(independent_decomposition(m, w).total, joint_wcre(m, w).value, 1e-5);
    }
}

TEST(MultivariateProperty, GridConvergence) {
    const std::vector<MultivariateModel> ms = {
        MultivariateModel::independent({ex(1), ex(2)}), MultivariateModel::fgm(0.5, un(), un()),
        MultivariateModel::fgm(-0.7, ex(1), UnivariateModel::gamma(2, 1)),
        MultivariateModel::gaussian({0, 0}, (Eigen::MatrixXd(2, 2) << 1, 0.5, 0.5, 2).finished())};
    for (const auto& m : ms) {
        QuadratureSpec full, half;
        half.grid_points_per_dim = full.grid_points_per_dim / 2;
        const double a = joint_wcre(m, one(), full).value, b = joint_wcre(m, one(), half).value;
        EXPECT_LT(std::abs(a - b), 1e-4 * std::abs(a)) << m.family_name();
    }
}

TEST(MultivariateProperty, ChainIsMarkov) {
    const auto m = MultivariateModel::fgm_chain(0.4, 0.5, ex(1), ex(1), ex(1));
    for (double a : {0.1, 1.0})
        for (double b : {0.3, 2.0})
            for (double c : {0.2, 1.5}) {
                const double x[3] = {a, b, c};
                EXPECT_NEAR(m.subset_sf(7u, x) * m.subset_sf(2u, x), m.subset_sf(3u, x) * m.subset_sf(6u, x), 1e-15);
            }
}

TEST(Multivariate, InvalidFgmRejected) {
    EXPECT_THROW(MultivariateModel::fgm(1.5, ex(1), ex(1)), DomainError);
}

#include "oracle.hpp"

#include "wcre/errors.hpp"
#include "wcre/gaussian.hpp"
#include "wcre/multivariate.hpp"
#include "wcre/quadrature.hpp"
#include "wcre/univariate.hpp"
#include "wcre/weight.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace wcre;

TEST(Weight, PsiValues) {
    EXPECT_DOUBLE_EQ(psi(WeightFunction::power(1), 2.0), 2.0);
    EXPECT_DOUBLE_EQ(psi(WeightFunction::constant(1), 3.5), 3.5);
    const double ref = oracle::on_interval([](double t) { return std::exp(-t); }, 0.0, 1.0);
    EXPECT_NEAR(psi(WeightFunction::exponential(1), 1.0), ref, 1e-12);
    EXPECT_NEAR(ref, 1.0 - std::exp(-1.0), 1e-12);
}

TEST(Weight, PsiStarValues) {
    EXPECT_DOUBLE_EQ(psi_star(WeightFunction::constant(1), 1, 2.0), 2.0);
    EXPECT_NEAR(psi_star(WeightFunction::power(1), 1, 1.0), 1.0 / 3.0, 1e-15);
    const double ref = oracle::on_half_line([](double t) { return t * t * std::exp(-t); });
    EXPECT_NEAR(psi_star(WeightFunction::exponential(1), 2, 60.0), ref, 1e-10);
    EXPECT_NEAR(ref, 2.0, 1e-10);
}

TEST(Weight, NonIntegrablePowerRejected) {
    EXPECT_THROW(WeightFunction::power(-1.0).psi(1.0), DomainError);
}

TEST(Weight, PsiMonotoneAndZeroAtOrigin) {
    const std::vector<WeightFunction> ws = {WeightFunction::constant(2), WeightFunction::power(0.5),
                                            WeightFunction::power(-0.5), WeightFunction::exponential(0.7),
                                            WeightFunction::scaled_power(3, 2),
                                            WeightFunction::tabulated({{0, 1}, {1, 3}, {4, 0.5}})};
    for (const auto& w : ws) {
        EXPECT_EQ(w.psi(0.0), 0.0) << w.kind_name();
        double prev = 0.0;
        for (double x = 0.05; x < 6.0; x += 0.05) {
            const double v = w.psi(x);
            EXPECT_GE(v, prev - 1e-14) << w.kind_name() << " x=" << x;
            prev = v;
            EXPECT_NEAR(w.psi_star(0.0, x), v, 1e-10 * std::max(1.0, v)) << w.kind_name();
        }
    }
}

TEST(Quadrature, OneDimensionalExamples) {
    QuadratureSpec spec;
    IntegrationOptions opt;
    opt.envelope = [](double x) { return std::exp(-x); };
    EXPECT_NEAR(integrate_1d([](double x) { return x * std::exp(-x); }, 0.0, INFINITY, spec, opt).value, 1.0, 1e-9);
    EXPECT_EQ(integrate_1d([](double) { return 1.0; }, 0.0, 1.0).value, 1.0);
    auto cre = [](double x) { return x < 1.0 ? -(1.0 - x) * std::log1p(-x) : 0.0; };
    const double ref = oracle::on_interval(cre, 0.0, 1.0);
    EXPECT_NEAR(integrate_1d(cre, 0.0, 1.0).value, ref, 1e-10);
    EXPECT_NEAR(ref, 0.25, 1e-12);
}

TEST(Quadrature, TruncationPointRecorded) {
    IntegrationOptions opt;
    opt.envelope = [](double x) { return std::exp(-x); };
    const auto r = integrate_1d([](double x) { return std::exp(-x); }, 0.0, INFINITY, {}, opt);
    ASSERT_TRUE(r.truncation_point.has_value());
    EXPECT_GT(*r.truncation_point, 20.0);
}

TEST(Quadrature, NanRaisesIntegrandError) {
    try {
        integrate_1d([](double x) { return x > 0.5 ? NAN : 1.0; }, 0.0, 1.0);
        FAIL() << "no throw";
    } catch (const IntegrandError& e) {
        EXPECT_GT(e.abscissa(), 0.5);
    }
}

TEST(Quadrature, SubdivisionCapRaisesConvergenceError) {
    QuadratureSpec spec;
    spec.max_subdivisions = 2;
    spec.rel_tol = 1e-14;
    spec.abs_tol = 1e-16;
    EXPECT_THROW(integrate_1d([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, spec), ConvergenceError);
}

TEST(Quadrature, MultidimensionalExamples) {
    QuadratureSpec spec;
    auto axis = [] {
        AxisSpec a;
        a.hi = INFINITY;
        a.envelope = [](double x) { return std::exp(-x); };
        return a;
    };
    const auto r2 = integrate_nd([](std::span<const double> x) { return std::exp(-x[0] - x[1]); }, {axis(), axis()}, spec);
    EXPECT_NEAR(r2.value, 1.0, 1e-6);
    const auto r2b = integrate_nd([](std::span<const double> x) { return (x[0] + x[1]) * std::exp(-x[0] - x[1]); },
                                  {axis(), axis()}, spec);
    const double g2 = oracle::on_half_line([](double x) { return x * std::exp(-x); });
    EXPECT_NEAR(r2b.value, 2.0 * g2, 1e-6);
    spec.grid_points_per_dim = 64;
    const auto r3 = integrate_nd([](std::span<const double> x) { return std::exp(-x[0] - x[1] - x[2]); },
                                 {axis(), axis(), axis()}, spec);
    EXPECT_NEAR(r3.value, 1.0, 1e-5);
}

// polynomial times exponential, coefficients from a seeded generator
TEST(QuadratureProperty, Linearity) {
    CounterRng rng(11, 0);
    IntegrationOptions opt;
    opt.envelope = [](double x) { return std::exp(-0.5 * x); };
    for (int t = 0; t < 20; ++t) {
        const double a = rng.uniform() * 4 - 2, b = rng.uniform() * 4 - 2;
        const double c0 = rng.uniform(), c1 = rng.uniform(), c2 = rng.uniform();
        auto f = [=](double x) { return (c0 + c1 * x) * std::exp(-x); };
        auto g = [=](double x) { return (c2 * x * x) * std::exp(-0.5 * x); };
        const auto rf = integrate_1d(f, 0.0, INFINITY, {}, opt);
        const auto rg = integrate_1d(g, 0.0, INFINITY, {}, opt);
        const auto rs = integrate_1d([&](double x) { return a * f(x) + b * g(x); }, 0.0, INFINITY, {}, opt);
        const double err = std::abs(a) * rf.abs_error_estimate + std::abs(b) * rg.abs_error_estimate +
                           rs.abs_error_estimate + 1e-12 * (std::abs(rs.value) + 1.0);
        EXPECT_NEAR(rs.value, a * rf.value + b * rg.value, err);
    }
}

TEST(QuadratureProperty, TailMassRefinementStable) {
    const auto m = UnivariateModel::exponential(1.0);
    QuadratureSpec coarse, fine;
    fine.tail_mass = coarse.tail_mass / 10.0;
    auto run = [&](const QuadratureSpec& s) {
        IntegrationOptions opt;
        opt.envelope = [&](double x) { return m.sf(x); };
        return integrate_1d([&](double x) { return oracle::eta(m.sf(x)); }, 0.0, INFINITY, s, opt).value;
    };
    EXPECT_LT(std::abs(run(coarse) - run(fine)), 1e-8);
}

TEST(QuadratureProperty, SeparableMatchesProduct) {
    QuadratureSpec spec;
    auto f1 = [](double x) { return (1 + x) * std::exp(-2 * x); };
    auto f2 = [](double y) { return y * y * std::exp(-y); };
    AxisSpec a;
    a.hi = INFINITY;
    a.envelope = [](double x) { return std::exp(-x); };
    const double nd = integrate_nd([&](std::span<const double> x) { return f1(x[0]) * f2(x[1]); }, {a, a}, spec).value;
    IntegrationOptions o1, o2;
    o1.envelope = [](double x) { return std::exp(-2 * x); };
    o2.envelope = a.envelope;
    const double prod = integrate_1d(f1, 0, INFINITY, spec, o1).value * integrate_1d(f2, 0, INFINITY, spec, o2).value;
    EXPECT_NEAR(nd / prod, 1.0, 1e-6);
}

TEST(Models, SfIsComplementOfCdf) {
    const std::vector<UnivariateModel> ms = {UnivariateModel::uniform(0, 2), UnivariateModel::exponential(1.5),
                                             UnivariateModel::weibull(1, 2), UnivariateModel::gamma(2, 0.5),
                                             UnivariateModel::gaussian(1, 0.5)};
    for (const auto& m : ms)
        for (double x = 0.0; x < 4.0; x += 0.25) EXPECT_NEAR(m.sf(x) + m.cdf(x), 1.0, 1e-14) << m.name();
}

TEST(Models, WeibullParametrization) {
    const auto m = UnivariateModel::weibull(2.0, 1.5);
    for (double x : {0.1, 0.5, 1.0, 2.0}) EXPECT_NEAR(m.sf(x), std::exp(-std::pow(2.0 * x, 1.5)), 1e-15);
}

TEST(Models, InvalidParametersRejected) {
    EXPECT_THROW(UnivariateModel::exponential(-1), DomainError);
    EXPECT_THROW(UnivariateModel::uniform(2, 1), DomainError);
    EXPECT_THROW(UnivariateModel::empirical({}), DomainError);
    EXPECT_THROW(UnivariateModel::empirical({1.0, -0.5}), DomainError);
}

// Kolmogorov statistic against the model's own cdf, critical value at 1e-3 about 1.95 / sqrt(n)
TEST(ModelsProperty, SamplerPassesKolmogorov) {
    const std::vector<UnivariateModel> ms = {
        UnivariateModel::uniform(0, 2),  UnivariateModel::exponential(1.5), UnivariateModel::weibull(1, 2),
        UnivariateModel::gamma(2, 0.5),  UnivariateModel::gamma(0.5, 2),    UnivariateModel::lomax(3, 1),
        UnivariateModel::mixture({0.3, 0.7}, {UnivariateModel::exponential(1), UnivariateModel::uniform(0, 1)}),
        UnivariateModel::fgm_conditional(UnivariateModel::exponential(1), 0.6)};
    const std::size_t n = 10000;
    for (const auto& m : ms) {
        auto xs = m.sample_n(n, 5, 0);
        std::sort(xs.begin(), xs.end());
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = m.cdf(xs[i]);
            d = std::max({d, c - double(i) / n, double(i + 1) / n - c});
        }
        EXPECT_LT(d, 1.95 / std::sqrt(double(n))) << m.name();
    }
}

TEST(ModelsProperty, FgmThetaZeroIsProduct) {
    const auto a = UnivariateModel::exponential(1), b = UnivariateModel::uniform(0, 2);
    const auto m = MultivariateModel::fgm(0.0, a, b);
    for (double x : {0.0, 0.3, 1.0, 2.5})
        for (double y : {0.0, 0.4, 1.1, 1.9}) {
            const double p[2] = {x, y};
            EXPECT_NEAR(m.sf(p), a.sf(x) * b.sf(y), 1e-12);
        }
}

TEST(ModelsProperty, FgmMarginalsAndConditional) {
    const auto a = UnivariateModel::exponential(1), b = UnivariateModel::exponential(2);
    const auto m = MultivariateModel::fgm(0.7, a, b);
    for (double x : {0.2, 1.0, 3.0}) {
        const double p[2] = {x, 0.0};
        EXPECT_NEAR(m.sf(p), a.sf(x), 1e-14);
        for (double y : {0.1, 0.8}) {
            const double q[2] = {x, y};
            EXPECT_NEAR(m.conditional_sf(x, y), m.sf(q) / b.sf(y), 1e-14);
        }
    }
}

TEST(Gaussian, AlphaStarAndRho) {
    Eigen::MatrixXd c1(1, 1);
    c1 << 1.0;
    const double z1[1] = {0.0};
    const double ref = oracle::on_half_line([](double t) { return std::exp(-t * t / 2); });
    EXPECT_NEAR(gaussian_alpha_star(z1, c1, z1), ref, 1e-9);
    EXPECT_NEAR(ref, std::sqrt(M_PI / 2), 1e-12);
    EXPECT_NEAR(gaussian_rho(z1, c1, z1), 0.5, 1e-12);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
    const double z2[2] = {0, 0}, far[2] = {40, 40};
    EXPECT_NEAR(gaussian_rho(z2, id, z2), 0.25, 1e-12);
    EXPECT_LT(gaussian_rho(z2, id, far), 1e-300);
}

TEST(GaussianProperty, DiagonalRhoIsPowerOfHalf) {
    for (int n = 1; n <= 3; ++n) {
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) c(i, i) = 0.5 + i;
        std::vector<double> z(static_cast<std::size_t>(n), 0.0);
        EXPECT_NEAR(gaussian_rho(z, c, z), std::pow(0.5, n), 1e-8);
    }
}

TEST(Gaussian, BivariateOrthantAgainstOracle) {
    for (double r : {-0.6, 0.0, 0.3, 0.9}) {
        // P[Z1 > h, Z2 > k] = int_h^inf pdf(z) Q((k - r z) / sqrt(1 - r^2)) dz
        const double h = 0.4, k = -0.3;
        const double ref = oracle::on_interval(
            [&](double z) { return normal_pdf(z) * normal_q((k - r * z) / std::sqrt(1 - r * r)); }, h, 40.0);
        EXPECT_NEAR(bivariate_normal_upper(h, k, r), ref, 1e-10) << r;
    }
}

TEST(Gaussian, NonSpdRejected) {
    Eigen::MatrixXd c(2, 2);
    c << 1, 2, 2, 1;
    EXPECT_THROW(require_spd(c), DomainError);
}

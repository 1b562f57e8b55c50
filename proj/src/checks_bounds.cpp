#include "checks_common.hpp"

namespace wcre {

using namespace detail;

namespace {

double mc_tolerance(const McEstimate& e) { return mc_standard_errors * e.std_error + tol_quadrature; }

CheckReport entropy_lb(const InstanceView& v) {
    const auto phi = v.weight();
    ReportBuilder b(v.instance(), tol_quadrature);
    UnivariateModel m = v.univariate(0);
    if (v.has("y")) {
        // law of X given Y = y under an FGM pair with marginals models[0], models[1]
        const auto my = v.univariate(1);
        const double k = v.param("theta") * (1.0 - 2.0 * my.cdf(v.param("y")));
        m = UnivariateModel::fgm_conditional(m, k);
        b.diagnostic("conditional_tilt", k);
        b.note("conditional law of X given Y = y");
    }
    const auto a = alpha_phi(m, phi, v.spec());
    const double h = shannon_entropy(m, v.spec());
    b.diagnostic("alpha_phi", a.value);
    b.diagnostic("shannon_entropy", h);
    b.hypothesis("phi positive almost everywhere", sign_value(!a.degenerate), Sign::nonneg);
    b.conclusion("wcre >= alpha_phi exp(h)", a.value * std::exp(h), wcre::wcre(m, phi, v.spec()).value);
    return b.finish();
}

// FGM pair, weight phi1(x) phi2(y)
CheckReport cross_lb(const InstanceView& v) {
    const auto m = v.multivariate(0);
    if (m.dim() != 2 || m.family() != MultivariateModel::Family::fgm)
        throw InputError("CROSS_LB needs a bivariate fgm model");
    const auto w = v.joint_weight(2);
    const auto& mx = m.marginal(0);
    const auto& my = m.marginal(1);
    const double theta = m.thetas().at(0);
    const WeightFunction p1 = w.marginal_factor(0), p2 = w.marginal_factor(1);
    const auto spec = v.spec();
    const auto inner = spec.tightened(0.01);

    ReportBuilder b(v.instance(), tol_quadrature);
    const double cx = std::max(mx.truncation_point(spec.tail_mass), 1.0), cy = std::max(my.truncation_point(spec.tail_mass), 1.0);
    std::vector<double> probes;
    for (int k = 0; k <= 200; ++k) probes.push_back(k / 200.0);
    double lowest = INFINITY;
    for (double t : probes) lowest = std::min({lowest, p1(t * cx), p2(t * cy)});
    b.hypothesis("phi(x, y) - 1", lowest - 1.0, Sign::nonneg);

    auto cond = [&](double x) { return UnivariateModel::fgm_conditional(my, theta * (1.0 - 2.0 * mx.cdf(x))); };
    const WeightFn phibar = [&](double x) { return p1(x) * cond(x).expect([&](double y) { return p2(y); }, inner); };
    const double first = wcre::wcre(mx, phibar, spec).value;
    const double second = mx.expect([&](double x) { return p1(x) * wcre::wcre(cond(x), p2, inner).value; }, spec);

    // E log phi(X, Y) splits over the factors
    const double elog = mx.expect([&](double x) { return std::log(p1(x)); }, spec) +
                        my.expect([&](double y) { return std::log(p2(y)); }, spec);
    const double alpha_star = std::exp(elog + log_entropy_constant());
    IntegrationOptions opt;
    const double cop = integrate_1d(
                           [&](double u) {
                               return integrate_1d(
                                          [&](double s) {
                                              const double c = 1.0 + theta * (1.0 - 2.0 * u) * (1.0 - 2.0 * s);
                                              return c > 0 ? c * std::log(c) : 0.0;
                                          },
                                          0.0, 1.0, inner, opt)
                                   .value;
                           },
                           0.0, 1.0, spec, opt)
                           .value;
    const double h = shannon_entropy(mx, spec) + shannon_entropy(my, spec) - cop;
    b.diagnostic("wcre_phibar", first);
    b.diagnostic("expected_conditional_wcre", second);
    b.diagnostic("alpha_star", alpha_star);
    b.diagnostic("joint_shannon_entropy", h);
    b.conclusion("cross wcre >= 2 alpha* exp(h/2)", 2.0 * alpha_star * std::exp(h / 2.0), first + second);
    return b.finish();
}

CheckReport we_relation(const InstanceView& v) {
    const auto m = v.univariate(0);
    const auto phi = v.weight();
    const auto spec = v.spec();
    ReportBuilder b(v.instance(), tol_identity);
    b.hypothesis("psi bounded", sign_value(std::isfinite(phi.psi_limit())), Sign::nonneg);
    b.hypothesis("psi(0) = 0", -std::abs(phi.psi(0.0)), Sign::nonneg);

    const double e = wcre::wcre(m, phi, spec).value;
    const double mean = m.expect([](double x) { return x; }, spec);
    const double epsi = psi_mean(m, phi, spec);
    // Y with density sf / E X
    const double hw = half_line(
        [&](double x) {
            const double f = m.sf(x) / mean;
            return f > 0 ? -phi(x) * f * std::log(f) : 0.0;
        },
        {&m}, spec);
    // Y with density phi sf / E psi
    const double theta = half_line(
        [&](double x) {
            const double w = phi(x);
            return w > 0 ? w * std::log(w) * m.sf(x) : 0.0;
        },
        {&m}, spec);
    const double hs = half_line(
        [&](double x) {
            const double f = phi(x) * m.sf(x) / epsi;
            return f > 0 ? -f * std::log(f) : 0.0;
        },
        {&m}, spec);
    const double rhs1 = e / mean + epsi / mean * std::log(mean);
    const double rhs2 = e / epsi - theta / epsi + std::log(epsi);
    b.diagnostic("weighted_entropy_Y", hw);
    b.diagnostic("shannon_entropy_Y", hs);
    b.diagnostic("theta", theta);
    b.conclusion("(i) weighted entropy identity", std::abs(hw - rhs1), 0.0, {"psi bounded"});
    b.conclusion("(ii) Shannon entropy identity", std::abs(hs - rhs2), 0.0);
    return b.finish();
}

CheckReport gini_lb(const InstanceView& v) {
    const auto m = v.univariate(0);
    const auto phi = v.weight();
    const auto n = static_cast<std::size_t>(v.param("n_mc", 1e5));
    ReportBuilder b(v.instance(), tol_quadrature);
    b.hypothesis("support nonnegative", m.support_lo(), Sign::nonneg);
    const double e2 = 2.0 * wcre::wcre(m, phi, v.spec()).value;
    const auto g = gini_psi_statistic(m, phi, v.spec(), n, v.seed());
    const auto c = gini_centered_statistic(m, phi, v.spec(), n, v.seed());
    b.diagnostic("gini_std_error", g.std_error);
    b.diagnostic("centered_std_error", c.std_error);
    b.conclusion("2 wcre >= E|psi(X) - psi(Y)|", g.value, e2, {}, mc_tolerance(g));
    b.conclusion("2 wcre >= E|psi(X) - E psi(X)|", c.value, e2, {}, mc_tolerance(c));
    return b.finish();
}

CheckReport surv_identity(const InstanceView& v) {
    const auto m = v.univariate(0);
    const auto phi = v.weight();
    ReportBuilder b(v.instance(), tol_identity);
    const double e = wcre::wcre(m, phi, v.spec()).value;
    const double s = survival_identity_value(m, phi, v.spec());
    b.diagnostic("wcre", e);
    b.diagnostic("identity_value", s);
    b.conclusion("wcre = E[(psi(0) - psi(X))(1 + log sf(X))]", std::abs(e - s), 0.0);
    return b.finish();
}

CheckReport fenchel_ub(const InstanceView& v) {
    const auto m = v.univariate(0);
    const auto phi = v.weight();
    const auto n = static_cast<std::size_t>(v.param("n_mc", 1e5));
    ReportBuilder b(v.instance(), tol_quadrature);
    const auto f = fenchel_upper_bound(m, phi, v.spec(), n, v.seed());
    b.diagnostic("bound_std_error", f.std_error);
    b.conclusion("wcre <= 2 E[|D| log |D|] + 4/e", wcre::wcre(m, phi, v.spec()).value, f.value, {}, mc_tolerance(f));
    return b.finish();
}

CheckReport logplus(const InstanceView& v) {
    const auto m = v.univariate(0);
    const auto phi = v.weight();
    ReportBuilder b(v.instance(), tol_quadrature);
    const auto r = log_plus_moment_bound(m, phi, v.spec());
    b.diagnostic("psi_inverse_one", r.psi_inv_one);
    b.conclusion("E[psi log+ psi] bound", r.lhs, r.rhs);
    return b.finish();
}

}  // namespace

void register_bound_checks(CheckRegistry& r) {
    r.add("ENTROPY_LB", entropy_lb);
    r.add("CROSS_LB", cross_lb);
    r.add("WE_RELATION", we_relation);
    r.add("GINI_LB", gini_lb);
    r.add("SURV_IDENTITY", surv_identity);
    r.add("FENCHEL_UB", fenchel_ub);
    r.add("LOGPLUS", logplus);
}

}  // namespace wcre

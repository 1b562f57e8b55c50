#include "checks_common.hpp"

#include "wcre/gaussian.hpp"

#include <boost/math/tools/roots.hpp>

#include <optional>

namespace wcre {

using namespace detail;

namespace {

// root of f on [lo, hi] when the ends straddle zero
std::optional<double> root_in(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo), fhi = f(hi);
    if (!std::isfinite(flo) || !std::isfinite(fhi)) return std::nullopt;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0) == (fhi < 0)) return std::nullopt;
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(40), iters);
    return 0.5 * (r.first + r.second);
}

CheckReport max_generic(const InstanceView& v) {
    const auto f = v.univariate(0), fm = v.univariate(1);
    const auto phi = v.weight();
    const auto spec = v.spec();
    ReportBuilder b(v.instance(), tol_quadrature);
    b.hypothesis("int phi (F - Fm)", sf_gap_integral(f, fm, phi, spec), Sign::nonneg);
    double second = 0.0;
    const double cut = common_cut({&f, &fm}, spec);
    if (std::isfinite(fm.support_hi()) && fm.support_hi() < cut && f.sf(fm.support_hi()) > 0) {
        second = -INFINITY;  // log Fm = -inf where F still has mass
    } else {
        second = half_line(
            [&](double x) {
                const double d = f.sf(x) - fm.sf(x);
                if (d == 0.0) return 0.0;
                return phi(x) * d * fm.log_sf(x);
            },
            {&f, &fm}, spec);
    }
    b.hypothesis("int phi (F - Fm) log Fm", second, Sign::nonneg);
    b.conclusion("E(F) <= E(Fm)", wcre::wcre(f, phi, spec).value, wcre::wcre(fm, phi, spec).value);
    return b.finish();
}

// normal law with the mean and sd of X, restricted to the half line
CheckReport max_gauss(const InstanceView& v) {
    const auto f = v.univariate(0);
    const auto phi = v.weight();
    const auto spec = v.spec();
    const double mu = f.expect([](double x) { return x; }, spec);
    const double sd = std::sqrt(std::max(0.0, f.expect([&](double x) { return (x - mu) * (x - mu); }, spec)));
    if (!(sd > 0)) throw DomainError("MAX_GAUSS needs a nondegenerate law");
    const auto sf_no = [&](double x) { return normal_q((x - mu) / sd); };
    // log of the normal tail, asymptotic series once the tail underflows
    const auto log_q = [](double z) {
        if (z < 30.0) return std::log(normal_q(z));
        const double r = 1.0 / (z * z);
        return -0.5 * z * z - std::log(z) - 0.5 * std::log(2.0 * M_PI) + std::log1p(-r + 3.0 * r * r);
    };
    const auto log_alpha = [&](double x) { return std::log(std::sqrt(2.0 * M_PI) * sd) + log_q((x - mu) / sd); };
    const double cut = std::max(f.truncation_point(spec.tail_mass), mu + 12.0 * sd);
    IntegrationOptions opt;
    opt.breakpoints = common_breaks({&f}, cut);
    if (mu > 0 && mu < cut) opt.breakpoints.push_back(mu);
    std::sort(opt.breakpoints.begin(), opt.breakpoints.end());
    auto integral = [&](const Integrand& g) { return integrate_1d(g, 0.0, cut, spec, opt).value; };

    const double gap = integral([&](double x) { return phi(x) * (f.sf(x) - sf_no(x)); });
    const double gap_log = integral([&](double x) {
        const double d = f.sf(x) - sf_no(x);
        return d == 0.0 ? 0.0 : phi(x) * d * log_alpha(x);
    });
    const double lognorm = 0.5 * std::log(2.0 * M_PI * sd * sd);
    const double mass_no = integral([&](double x) { return phi(x) * sf_no(x); });
    const double tail_no = integral([&](double x) {
        const double s = sf_no(x);
        return s > 0 ? phi(x) * s * log_alpha(x) : 0.0;
    });
    ReportBuilder b(v.instance(), tol_quadrature);
    b.diagnostic("mean", mu);
    b.diagnostic("sd", sd);
    b.hypothesis("int phi (F - F_No)", gap, Sign::nonneg);
    b.hypothesis("log((2 pi)^(1/2) sd) int phi (F - F_No) - int phi (F - F_No) log alpha*", lognorm * gap - gap_log,
                 Sign::nonpos);
    b.conclusion("E(F) <= E(F_No)", wcre::wcre(f, phi, spec).value, lognorm * mass_no - tail_no);
    b.note("one-dimensional form");
    return b.finish();
}

CheckReport max_exp(const InstanceView& v) {
    const auto f = v.univariate(0);
    const auto phi = v.weight();
    const auto spec = v.spec();
    const double mean_psi = psi_mean(f, phi, spec);
    if (!(mean_psi > 0)) throw DomainError("MAX_EXP needs E psi(X) - psi(0) > 0");
    const double lam = 1.0 / mean_psi;
    const double cut = std::max(f.truncation_point(spec.tail_mass), -std::log(spec.tail_mass) / lam);
    IntegrationOptions opt;
    opt.breakpoints = common_breaks({&f}, cut);
    auto integral = [&](const Integrand& g) { return integrate_1d(g, 0.0, cut, spec, opt).value; };
    const double h1 = integral([&](double x) { return phi(x) * (f.sf(x) - std::exp(-lam * x)); });
    const double h2 = integral([&](double x) { return x * phi(x) * (f.sf(x) - std::exp(-lam * x)); });
    const double rhs = lam * integral([&](double x) { return x * phi(x) * std::exp(-lam * x); });
    ReportBuilder b(v.instance(), tol_quadrature);
    b.diagnostic("lambda", lam);
    b.hypothesis("int phi (F - F_Exp)", h1, Sign::nonneg);
    b.hypothesis("int x phi (F - F_Exp)", h2, Sign::nonpos);
    b.conclusion("E(F) <= lambda int x phi exp(-lambda x)", wcre::wcre(f, phi, spec).value, rhs);
    return b.finish();
}

// tensor rule on [0, cut]^2 shared by the three covariance matrices
struct PlaneRule {
    AxisRule axis;
    template <class F>
    double sum(F&& g) const {
        double s = 0.0;
        for (std::size_t i = 0; i < axis.nodes.size(); ++i)
            for (std::size_t j = 0; j < axis.nodes.size(); ++j)
                s += axis.weights[i] * axis.weights[j] * g(axis.nodes[i], axis.nodes[j]);
        return s;
    }
};

CheckReport ky_fan(const InstanceView& v) {
    const Eigen::MatrixXd c1 = v.matrix("C1"), c2 = v.matrix("C2");
    if (c1.rows() != 2 || c2.rows() != 2) throw InputError("KY_FAN takes 2x2 matrices");
    require_spd(c1);
    require_spd(c2);
    const double l1 = v.param("lambda1");
    if (!(l1 >= 0 && l1 <= 1)) throw InputError("lambda1 must lie in [0, 1]");
    const double l2 = 1.0 - l1;
    const Eigen::MatrixXd c = l1 * c1 + l2 * c2;
    const auto w = v.joint_weight(2);
    const auto spec = v.spec();
    const std::vector<double> zero{0.0, 0.0};
    ReportBuilder b(v.instance(), tol_grid);

    // conditions on each weight factor against the normal marginals
    double cond_i = INFINITY, cond_ii = -INFINITY;
    for (int k = 0; k < 2; ++k) {
        const auto fk = w.marginal_factor(k);
        cond_i = std::min(cond_i, concavity_condition_i(fk));
        for (const Eigen::MatrixXd* m : {&c1, &c2, &c}) {
            const auto g = UnivariateModel::gaussian(0.0, std::sqrt((*m)(k, k)));
            cond_ii = std::max(cond_ii, concavity_condition_ii(fk, g, spec));
        }
    }
    b.hypothesis("(i) phi rises on [0, 1/e] and falls on [1/e, 1]", cond_i, Sign::nonneg);
    b.hypothesis("(ii) phi'' - (f'/f) phi' <= 0", cond_ii, Sign::nonpos);

    double cut = 0.0;
    for (const Eigen::MatrixXd* m : {&c1, &c2, &c})
        for (int k = 0; k < 2; ++k) cut = std::max(cut, std::sqrt((*m)(k, k)) * 8.5);
    const int n = static_cast<int>(v.param("grid", spec.grid_points_per_dim));
    const PlaneRule rule{axis_rule(0.0, cut, n)};
    const double logdet = std::log(2.0 * M_PI * std::sqrt(c.determinant()));
    double h1 = 0.0, h2 = 0.0;
    h1 = rule.sum([&](double x, double y) {
        const double p[2] = {x, y};
        const double d = l1 * gaussian_orthant(zero, c1, p) + l2 * gaussian_orthant(zero, c2, p) - gaussian_orthant(zero, c, p);
        return w(p) * d;
    });
    h2 = logdet * h1 - rule.sum([&](double x, double y) {
        const double p[2] = {x, y};
        const double d = l1 * gaussian_orthant(zero, c1, p) + l2 * gaussian_orthant(zero, c2, p) - gaussian_orthant(zero, c, p);
        const double a = gaussian_alpha_star(zero, c, p);
        return d == 0.0 || !(a > 0) ? 0.0 : w(p) * d * std::log(a);
    });
    b.hypothesis("int phi (l1 F_C1 + l2 F_C2 - F_C)", h1, Sign::nonneg);
    b.hypothesis("log((2 pi) det(C)^(1/2)) int phi D - int phi D log alpha*_C", h2, Sign::nonpos);

    const double r1 = gaussian_rho(zero, c1, zero), r2 = gaussian_rho(zero, c2, zero), r = gaussian_rho(zero, c, zero);
    b.diagnostic("rho_C1", r1);
    b.diagnostic("rho_C2", r2);
    b.diagnostic("rho_C", r);
    b.conclusion("rho(l1 C1 + l2 C2) >= l1 rho(C1) + l2 rho(C2)", l1 * r1 + l2 * r2, r, {}, 1e-8);
    b.note("rho evaluated at x = 0 with zero mean");
    return b.finish();
}

struct Moments {
    double psi = 0.0;   // E psi(X) - psi(0)
    double star = 0.0;  // E psi*_p(X) - psi*_p(0)
};

Moments moments(const UnivariateModel& m, const WeightFunction& phi, double p, const QuadratureSpec& spec) {
    const double s0 = phi.psi_star(p, 0.0);
    return {psi_mean(m, phi, spec), m.expect([&](double x) { return phi.psi_star(p, std::max(0.0, x)) - s0; }, spec)};
}

// bound shared by every law with these moments
double weibull_bound(const Moments& mo, double p) {
    const double cp = std::tgamma(1.0 + 1.0 / p);
    return std::pow(cp / mo.psi, p) * mo.star;
}

struct Candidate {
    std::string name;
    double shape_lo, shape_hi;
    std::function<UnivariateModel(double shape, double scale)> make;
};

std::optional<UnivariateModel> match(const Candidate& c, const Moments& target, const WeightFunction& phi, double p,
                                     const QuadratureSpec& spec) {
    auto scale_for = [&](double s) -> std::optional<double> {
        auto g = [&](double sc) { return psi_mean(c.make(s, sc), phi, spec) - target.psi; };
        double lo = 1e-3, hi = 1.0;
        int k = 0;
        while (g(hi) < 0 && k++ < 40) hi *= 2.0;
        while (g(lo) > 0 && k++ < 80) lo /= 2.0;
        return root_in(g, lo, hi);
    };
    auto h = [&](double s) -> double {
        const auto sc = scale_for(s);
        if (!sc) return NAN;
        return moments(c.make(s, *sc), phi, p, spec).star - target.star;
    };
    // scan for a sign change, then refine
    const int steps = 12;
    double prev_s = c.shape_lo, prev_h = h(prev_s);
    for (int i = 1; i <= steps; ++i) {
        const double s = c.shape_lo + (c.shape_hi - c.shape_lo) * i / steps;
        const double hs = h(s);
        if (std::isfinite(prev_h) && std::isfinite(hs) && (prev_h < 0) != (hs < 0)) {
            const auto root = root_in(h, prev_s, s);
            if (!root) return std::nullopt;
            const auto sc = scale_for(*root);
            if (!sc) return std::nullopt;
            return c.make(*root, *sc);
        }
        prev_s = s;
        prev_h = hs;
    }
    return std::nullopt;
}

CheckReport max_weibull(const InstanceView& v) {
    const auto f = v.univariate(0);
    const auto phi = v.weight();
    const double p = v.param("p");
    if (!(p > 0)) throw InputError("p must be positive");
    const auto spec = v.spec();
    ReportBuilder b(v.instance(), tol_quadrature);
    b.hypothesis("0 <= phi <= 1", weight_range_margin(phi, common_cut({&f}, spec), 0.0, 1.0), Sign::nonneg);

    const auto mo = moments(f, phi, p, spec);
    const double bound = weibull_bound(mo, p);
    // lambda with lambda^p int t^p phi sf_Wib = bound
    auto wib_value = [&](double lam) {
        const auto w = UnivariateModel::weibull(lam, p);
        return std::pow(lam, p) * moments(w, phi, p, spec).star - bound;
    };
    double lo = 1e-3, hi = 1.0;
    for (int k = 0; k < 40 && wib_value(hi) > 0; ++k) hi *= 2.0;
    for (int k = 0; k < 40 && wib_value(lo) < 0; ++k) lo /= 2.0;
    const auto lam = root_in(wib_value, lo, hi);
    b.diagnostic("bound", bound);
    if (lam) {
        b.diagnostic("lambda", *lam);
        b.diagnostic("wcre_weibull", wcre::wcre(UnivariateModel::weibull(*lam, p), phi, spec).value);
    } else {
        b.note("no weibull rate reproduces the bound");
    }
    b.conclusion("E(X) <= E(Wib)", wcre::wcre(f, phi, spec).value, bound);

    const std::vector<Candidate> candidates{
        {"gamma", 0.3, 30.0, [](double s, double sc) { return UnivariateModel::gamma(s, sc); }},
        {"uniform", 0.0, 0.95, [](double s, double sc) { return UnivariateModel::uniform(s * sc, sc); }},
        {"weibull", 0.4, 8.0, [](double s, double sc) { return UnivariateModel::weibull(1.0 / sc, s); }},
    };
    for (const auto& c : candidates) {
        const auto g = match(c, mo, phi, p, spec);
        if (!g) {
            b.note("candidate " + c.name + " skipped: moments not matched");
            continue;
        }
        const auto gm = moments(*g, phi, p, spec);
        b.diagnostic(c.name + "_moment_mismatch",
                     std::max(std::abs(gm.psi - mo.psi) / mo.psi, std::abs(gm.star - mo.star) / mo.star));
        b.conclusion("E(" + c.name + ") <= E(Wib)", wcre::wcre(*g, phi, spec).value, weibull_bound(gm, p));
    }
    return b.finish();
}

}  // namespace

void register_maxent_checks(CheckRegistry& r) {
    r.add("MAX_GENERIC", max_generic);
    r.add("MAX_GAUSS", max_gauss);
    r.add("MAX_EXP", max_exp);
    r.add("KY_FAN", ky_fan);
    r.add("MAX_WEIBULL", max_weibull);
}

}  // namespace wcre

#include "wcre/entropy.hpp"

#include "wcre/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wcre {

namespace {

struct Domain {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> breaks;
};

Domain domain_of(const UnivariateModel& m, const QuadratureSpec& spec, std::span<const double> extra) {
    Domain d;
    d.hi = std::max(0.0, m.truncation_point(spec.tail_mass));
    d.breaks = m.partition(d.hi);
    if (m.support_lo() > 0 && m.support_lo() < d.hi) d.breaks.push_back(m.support_lo());
    for (double b : extra)
        if (b > 0 && b < d.hi) d.breaks.push_back(b);
    return d;
}

double param(const ParamList& ps, const std::string& key) {
    for (const auto& [k, v] : ps)
        if (k == key) return v;
    throw DomainError("missing parameter " + key);
}

// Extends the cut by 10x and declares divergence when the extra piece is not negligible.
void check_tail(const UnivariateModel& m, const Integrand& f, double value, double cut, const QuadratureSpec& spec,
                const char* what) {
    if (std::isfinite(m.support_hi()) || cut <= 0) return;
    IntegrationOptions opt;
    opt.allow_unconverged = true;
    for (double x = 2.0 * cut; x < 10.0 * cut; x *= 2.0) opt.breakpoints.push_back(x);
    const double ext = integrate_1d(f, cut, 10.0 * cut, spec, opt).value;
    const double limit = std::max(spec.rel_tol * std::abs(value), spec.abs_tol) * 1e3;
    if (std::abs(ext) > limit) {
        std::ostringstream msg;
        msg << what << " does not settle: extending the cut " << cut << " tenfold adds " << ext;
        throw DivergenceError(msg.str(), value, ext);
    }
}

EntropyValue sf_functional(const UnivariateModel& m, const WeightFn& phi, const QuadratureSpec& spec,
                           std::span<const double> extra, bool use_cdf) {
    spec.validate();
    const Domain d = domain_of(m, spec, extra);
    Integrand f;
    if (!use_cdf) {
        f = [&](double x) {
            const double w = phi(x);
            if (w == 0.0) return 0.0;
            const double s = m.sf(x);
            if (s <= 0.0 || s >= 1.0) return 0.0;
            return w * neg_s_log_s(s, m.log_sf(x));
        };
    } else {
        f = [&](double x) {
            const double w = phi(x);
            if (w == 0.0) return 0.0;
            const double s = m.sf(x);
            double F, logF;
            if (s < 0.5) {
                F = 1.0 - s;
                logF = std::log1p(-s);
            } else {
                F = m.cdf(x);
                logF = F > 0 ? std::log(F) : -INFINITY;
            }
            if (F <= 0.0 || F >= 1.0) return 0.0;
            return w * neg_s_log_s(F, logF);
        };
    }
    EntropyValue out;
    if (!(d.hi > d.lo)) return out;
    out.quadrature = integrate_1d(f, d.lo, d.hi, spec, {.envelope = {}, .breakpoints = d.breaks});
    out.quadrature.truncation_point = d.hi;
    out.value = std::max(0.0, out.quadrature.value);
    check_tail(m, f, out.value, d.hi, spec, use_cdf ? "cumulative entropy" : "cumulative residual entropy");
    return out;
}

WeightFn as_fn(const WeightFunction& phi) {
    return [&phi](double x) { return phi(x); };
}

// E g(X) truncated at the model cut, with the same tenfold tail test
std::pair<double, bool> settled_expectation(const UnivariateModel& m, const Integrand& g, const QuadratureSpec& spec) {
    const double v = m.expect(g, spec);
    if (std::isfinite(m.support_hi())) return {v, true};
    const double cut = m.truncation_point(spec.tail_mass);
    try {
        check_tail(m, [&](double x) { const double p = m.pdf(x); return p == 0.0 ? 0.0 : g(x) * p; }, v, cut, spec,
                   "moment");
    } catch (const DivergenceError&) {
        return {v, false};
    }
    return {v, true};
}

class ConvolutionFamily : public UnivariateFamily {
public:
    ConvolutionFamily(UnivariateModel x, UnivariateModel y, QuadratureSpec spec)
        : x_(std::move(x)), y_(std::move(y)), spec_(spec.tightened(0.1)) {
        if (!x_.absolutely_continuous() && y_.absolutely_continuous()) std::swap(x_, y_);
        std::vector<double> xs = x_.breakpoints(), ys = y_.breakpoints();
        xs.push_back(x_.support_lo());
        ys.push_back(y_.support_lo());
        if (std::isfinite(x_.support_hi())) xs.push_back(x_.support_hi());
        if (std::isfinite(y_.support_hi())) ys.push_back(y_.support_hi());
        for (double a : xs)
            for (double b : ys)
                if (a + b > support_lo() && a + b < support_hi()) breaks_.push_back(a + b);
        std::sort(breaks_.begin(), breaks_.end());
        breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
        xbreaks_ = xs;
    }
    std::string name() const override { return "convolution"; }
    ParamList params() const override { return {}; }

    double sf(double w) const override {
        if (w < support_lo()) return 1.0;
        if (w >= support_hi()) return 0.0;
        const auto br = shifted(w);
        return std::clamp(y_.expect([&](double y) { return y > w ? 1.0 : x_.sf(w - y); }, spec_, br), 0.0, 1.0);
    }
    double cdf(double w) const override { return 1.0 - sf(w); }
    double pdf(double w) const override {
        if (w <= support_lo() || w >= support_hi()) return 0.0;
        const auto br = shifted(w);
        return y_.expect([&](double y) { return y > w ? 0.0 : x_.pdf(w - y); }, spec_, br);
    }
    double quantile(double u) const override {
        double lo = support_lo(), hi = support_hi();
        if (!std::isfinite(hi)) {
            hi = lo + 1.0;
            while (cdf(hi) < u) hi = lo + 2.0 * (hi - lo);
        }
        for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
            const double m = 0.5 * (lo + hi);
            (cdf(m) < u ? lo : hi) = m;
        }
        return hi;
    }
    double support_lo() const override { return x_.support_lo() + y_.support_lo(); }
    double support_hi() const override { return x_.support_hi() + y_.support_hi(); }
    bool absolutely_continuous() const override { return x_.absolutely_continuous(); }
    std::vector<double> breakpoints() const override { return breaks_; }
    double sample(CounterRng& rng) const override { return x_.sample(rng) + y_.sample(rng); }

private:
    std::vector<double> shifted(double w) const {
        std::vector<double> br{w};
        for (double a : xbreaks_)
            if (w - a > 0) br.push_back(w - a);
        return br;
    }

    UnivariateModel x_, y_;
    QuadratureSpec spec_;
    std::vector<double> breaks_, xbreaks_;
};

}  // namespace

double neg_s_log_s(double s, double log_s) {
    if (!(s > 0.0) || s >= 1.0 || !std::isfinite(log_s)) return 0.0;
    return -s * log_s;
}

EntropyValue wcre(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec) {
    return sf_functional(m, as_fn(phi), spec, {}, false);
}

EntropyValue wcre(const UnivariateModel& m, const WeightFn& phi, const QuadratureSpec& spec,
                  std::span<const double> extra_breaks) {
    return sf_functional(m, phi, spec, extra_breaks, false);
}

EntropyValue wce(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec) {
    return sf_functional(m, as_fn(phi), spec, {}, true);
}

EntropyValue wce(const UnivariateModel& m, const WeightFn& phi, const QuadratureSpec& spec,
                 std::span<const double> extra_breaks) {
    return sf_functional(m, phi, spec, extra_breaks, true);
}

double residual_integral_mean(const UnivariateModel& m, const WeightFunction& phi, double t,
                              const QuadratureSpec& spec) {
    if (t < 0) throw DomainError("residual_integral_mean needs t >= 0");
    const double st = m.sf(t);
    if (!(st > 0)) throw DomainError("residual_integral_mean: sf(t) = 0");
    auto f = [&](double x) {
        const double w = phi(x);
        return w == 0.0 ? 0.0 : w * m.sf(x) / st;
    };
    IntegrationOptions opt;
    for (double b : m.breakpoints())
        if (b > t) opt.breakpoints.push_back(b);
    const double hi = m.support_hi();
    if (std::isfinite(hi)) {
        if (t >= hi) return 0.0;
        return integrate_1d(f, t, hi, spec, opt).value;
    }
    opt.envelope = [&](double x) { return m.sf(x) / st; };
    return integrate_1d(f, t, INFINITY, spec, opt).value;
}

double past_integral_mean(const UnivariateModel& m, const WeightFunction& phi, double t, const QuadratureSpec& spec) {
    if (t < 0) throw DomainError("past_integral_mean needs t >= 0");
    const double Ft = m.cdf(t);
    if (!(Ft > 0)) throw DomainError("past_integral_mean: F(t) = 0");
    if (t == 0) return 0.0;
    IntegrationOptions opt;
    for (double b : m.breakpoints())
        if (b > 0 && b < t) opt.breakpoints.push_back(b);
    auto f = [&](double x) {
        const double w = phi(x);
        return w == 0.0 ? 0.0 : w * m.cdf(x) / Ft;
    };
    return integrate_1d(f, 0.0, t, spec, opt).value;
}

double wcre_via_mean(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec) {
    if (!m.absolutely_continuous()) {
        if (m.support_lo() == m.support_hi()) return 0.0;  // point mass
        throw DomainError("wcre_via_mean needs an absolutely continuous model");
    }
    const QuadratureSpec inner = spec.tightened(0.01);
    return m.expect([&](double t) {
        if (!(m.sf(t) > 0)) return 0.0;
        return residual_integral_mean(m, phi, t, inner);
    }, spec);
}

double wce_via_mean(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec) {
    if (!m.absolutely_continuous()) {
        if (m.support_lo() == m.support_hi()) return 0.0;  // point mass
        throw DomainError("wce_via_mean needs an absolutely continuous model");
    }
    const QuadratureSpec inner = spec.tightened(0.01);
    return m.expect([&](double t) {
        if (!(m.cdf(t) > 0)) return 0.0;
        return past_integral_mean(m, phi, t, inner);
    }, spec);
}

double relative_wcre(const UnivariateModel& f, const UnivariateModel& g, const WeightFunction& phi,
                     const QuadratureSpec& spec) {
    return relative_wcre(f, g, as_fn(phi), spec);
}

double relative_wcre(const UnivariateModel& f, const UnivariateModel& g, const WeightFn& phi,
                     const QuadratureSpec& spec, std::span<const double> extra_breaks) {
    spec.validate();
    std::vector<double> extra(extra_breaks.begin(), extra_breaks.end());
    for (double b : g.breakpoints()) extra.push_back(b);
    if (g.support_lo() > 0) extra.push_back(g.support_lo());
    if (std::isfinite(g.support_hi())) extra.push_back(g.support_hi());
    const Domain d = domain_of(f, spec, extra);
    if (!(d.hi > d.lo)) return 0.0;
    auto h = [&](double x) {
        const double w = phi(x);
        if (w == 0.0) return 0.0;
        const double s = f.sf(x);
        if (!(s > 0)) return 0.0;
        const double lg = g.log_sf(x);
        if (!std::isfinite(lg)) {
            std::ostringstream msg;
            msg << "relative entropy: second survival function vanishes at x = " << x << " where the first is " << s;
            throw DomainError(msg.str());
        }
        return w * s * (f.log_sf(x) - lg);
    };
    return integrate_1d(h, d.lo, d.hi, spec, {.envelope = {}, .breakpoints = d.breaks}).value;
}

double sf_gap_integral(const UnivariateModel& f, const UnivariateModel& g, const WeightFunction& phi,
                       const QuadratureSpec& spec) {
    std::vector<double> extra = g.partition(g.truncation_point(spec.tail_mass));
    extra.push_back(g.truncation_point(spec.tail_mass));
    Domain d = domain_of(f, spec, extra);
    const double hi = std::max(d.hi, g.truncation_point(spec.tail_mass));
    for (double b : extra)
        if (b > 0 && b < hi) d.breaks.push_back(b);
    if (d.hi < hi) d.breaks.push_back(d.hi);
    if (!(hi > 0)) return 0.0;
    return integrate_1d([&](double x) { return phi(x) * (f.sf(x) - g.sf(x)); }, 0.0, hi, spec,
                        {.envelope = {}, .breakpoints = d.breaks})
        .value;
}

double log_entropy_constant() {
    static const double c = [] {
        QuadratureSpec s;
        s.rel_tol = 1e-13;
        s.abs_tol = 1e-15;
        s.max_subdivisions = 5000;
        auto f = [](double x) { return std::log(x) + std::log(-std::log(x)); };
        return integrate_1d(f, 0.0, 1.0, s, {.envelope = {}, .breakpoints = {0.5}}).value;
    }();
    return c;
}

AlphaPhi alpha_phi(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec) {
    struct Vanishes {};
    if (phi.is_constant()) {
        if (phi.coefficient() <= 0) return {0.0, true};
        return {phi.coefficient() * std::exp(log_entropy_constant()), false};
    }
    try {
        const double e = m.expect([&](double x) {
            const double w = phi(x);
            if (!(w > 0)) throw Vanishes{};
            return std::log(w);
        }, spec);
        return {std::exp(e + log_entropy_constant()), false};
    } catch (const Vanishes&) {
        return {0.0, true};
    }
}

double shannon_entropy(const UnivariateModel& m, const QuadratureSpec& spec) {
    if (!m.absolutely_continuous() || m.improper()) throw DomainError("shannon_entropy needs a density");
    return m.expect([&](double x) {
        const double p = m.pdf(x);
        return p > 0 ? -std::log(p) : 0.0;
    }, spec);
}

double psi_mean(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec) {
    const double p0 = phi.psi(0.0);
    return m.expect([&](double x) { return phi.psi(std::max(0.0, x)) - p0; }, spec);
}

McEstimate gini_psi_statistic(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec&,
                              std::size_t n_mc, std::uint64_t seed) {
    if (n_mc < 2) throw DomainError("n_mc must be at least 2");
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n_mc; ++i) {
        CounterRng rx(seed, 2 * i), ry(seed, 2 * i + 1);
        const double d = std::abs(phi.psi(std::max(0.0, m.sample(rx))) - phi.psi(std::max(0.0, m.sample(ry))));
        sum += d;
        sum2 += d * d;
    }
    const double n = static_cast<double>(n_mc);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), n_mc};
}

McEstimate gini_centered_statistic(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec,
                                   std::size_t n_mc, std::uint64_t seed) {
    if (n_mc < 2) throw DomainError("n_mc must be at least 2");
    const double mu = psi_mean(m, phi, spec) + phi.psi(0.0);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n_mc; ++i) {
        CounterRng rx(seed, 2 * i);
        const double d = std::abs(phi.psi(std::max(0.0, m.sample(rx))) - mu);
        sum += d;
        sum2 += d * d;
    }
    const double n = static_cast<double>(n_mc);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(var / n), n_mc};
}

double survival_identity_value(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec) {
    if (!m.absolutely_continuous()) throw DomainError("survival identity needs an absolutely continuous model");
    const double p0 = phi.psi(0.0);
    return m.expect([&](double x) {
        const double d = p0 - phi.psi(x);
        if (d == 0.0) return 0.0;
        const double ls = m.log_sf(x);
        if (!std::isfinite(ls)) return 0.0;
        return d * (1.0 + ls);
    }, spec);
}

McEstimate fenchel_upper_bound(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec,
                               std::size_t n_mc, std::uint64_t seed) {
    if (n_mc < 2) throw DomainError("n_mc must be at least 2");
    const double mu = psi_mean(m, phi, spec) + phi.psi(0.0);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n_mc; ++i) {
        CounterRng rx(seed, 2 * i);
        const double d = std::abs(phi.psi(std::max(0.0, m.sample(rx))) - mu);
        const double t = d > 0 ? 2.0 * d * std::log(d) : 0.0;
        sum += t;
        sum2 += t * t;
    }
    const double n = static_cast<double>(n_mc);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    return {mean + 4.0 / std::numbers::e, std::sqrt(var / n), n_mc};
}

double psi_inverse(const WeightFunction& phi, double level, double hi_hint) {
    if (phi.psi_limit() <= level) return INFINITY;
    double lo = 0.0, hi = std::max(hi_hint, 1.0);
    while (phi.psi(hi) < level) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return INFINITY;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (phi.psi(mid) < level ? lo : hi) = mid;
    }
    return hi;
}

LogPlusBound log_plus_moment_bound(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec) {
    LogPlusBound out;
    out.psi_inv_one = psi_inverse(phi, 1.0, 1.0);
    const double w = wcre(m, phi, spec).value;
    if (!std::isfinite(out.psi_inv_one)) {
        out.rhs = w;
        return out;
    }
    const double x1 = out.psi_inv_one;
    const std::vector<double> br{x1};
    out.lhs = m.expect([&](double x) {
        const double p = phi.psi(std::max(0.0, x));
        return p > 1.0 ? p * std::log(p) : 0.0;
    }, spec, br);
    const double tail = m.expect([&](double x) { return x > x1 ? phi.psi(x) : 0.0; }, spec, br);
    out.rhs = w + (tail > 0 ? tail * std::log(std::numbers::e * tail) : 0.0);
    return out;
}

UnivariateModel convolution_model(const UnivariateModel& x, const UnivariateModel& y, const QuadratureSpec& spec) {
    if (!x.absolutely_continuous() && !y.absolutely_continuous())
        throw DomainError("convolution_model needs at least one absolutely continuous input");
    return UnivariateModel::from_family(std::make_shared<ConvolutionFamily>(x, y, spec));
}

double shifted_weight_value(const WeightFunction& phi, const UnivariateModel& y, double x, const QuadratureSpec& spec) {
    return y.expect([&](double t) { return phi(x + std::max(0.0, t)); }, spec);
}

WeightFunction shifted_weight(const WeightFunction& phi, const UnivariateModel& y, const QuadratureSpec& spec,
                              double upper) {
    if (phi.is_constant()) return phi;
    if (!(upper > 0)) upper = y.truncation_point(spec.tail_mass);
    if (!(upper > 0)) upper = 1.0;
    constexpr int n = 2048;
    std::vector<Knot> knots;
    knots.reserve(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double r = static_cast<double>(k) / n;
        const double x = upper * r * r;
        if (!knots.empty() && x <= knots.back().x) continue;
        knots.push_back({x, std::max(0.0, shifted_weight_value(phi, y, x, spec))});
    }
    return WeightFunction::tabulated(std::move(knots));
}

FinitenessCertificate finiteness_report(const UnivariateModel& m, const WeightFunction& phi, double p, double alpha,
                                        double a, const QuadratureSpec& spec) {
    if (!(p >= 0) || !(alpha >= 0 && alpha < 1) || !(a > 0)) throw DomainError("certificate needs p >= 0, alpha in [0, 1), a > 0");
    FinitenessCertificate c;
    const auto [mom, mom_ok] = settled_expectation(m, [&](double x) { return std::pow(std::max(0.0, x), p); }, spec);
    c.moment = mom;
    c.moment_finite = mom_ok && std::isfinite(mom);
    c.psi_a = phi.psi(a) - phi.psi(0.0);

    const double q = p * alpha;
    double total = 0.0, last = INFINITY;
    QuadratureSpec s = spec;
    IntegrationOptions opt;
    opt.allow_unconverged = true;
    for (int k = 0; k < 15; ++k) {
        const double lo = a * std::pow(10.0, k), hi = 10.0 * lo;
        last = integrate_1d([&](double x) { return phi(x) * std::pow(x, -q); }, lo, hi, s, opt).value;
        total += last;
    }
    c.tail_integral = total;
    c.tail_finite = std::abs(last) <= std::max(spec.rel_tol * std::abs(total), spec.abs_tol) * 1e3;
    c.finite = c.moment_finite && c.tail_finite && std::isfinite(c.psi_a);
    c.bound = std::exp(-1.0) / (1.0 - alpha) * (c.psi_a + std::pow(c.moment, alpha) * c.tail_integral);
    return c;
}

bool finiteness_certificate(const UnivariateModel& m, const WeightFunction& phi, double p, double alpha, double a,
                            const QuadratureSpec& spec) {
    return finiteness_report(m, phi, p, alpha, a, spec).finite;
}

double family_closed_form_wcre(const std::string& family, const ParamList& params, const WeightFunction& phi) {
    double c = 0.0, a = 0.0;
    switch (phi.kind()) {
        case WeightFunction::Kind::constant: c = phi.coefficient(); break;
        case WeightFunction::Kind::power: c = 1.0; a = phi.exponent(); break;
        case WeightFunction::Kind::scaled_power: c = phi.coefficient(); a = phi.exponent(); break;
        default: throw DomainError("closed form needs a constant or power weight");
    }
    if (family == "exponential") {
        const double l = param(params, "lambda");
        return c * std::tgamma(a + 2.0) / std::pow(l, a + 1.0);
    }
    if (family == "weibull") {
        const double l = param(params, "lambda"), q = param(params, "q");
        return c * std::tgamma((q + a + 1.0) / q) / (q * std::pow(l, a + 1.0));
    }
    throw DomainError("no closed form for family " + family);
}

}  // namespace wcre

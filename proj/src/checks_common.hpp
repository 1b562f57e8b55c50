#pragma once

#include "wcre/entropy.hpp"
#include "wcre/entropy_multivariate.hpp"
#include "wcre/errors.hpp"
#include "wcre/harness.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

namespace wcre::detail {

// upper end shared by several laws: bounded supports end there, others at the tail cut
inline double common_cut(std::initializer_list<const UnivariateModel*> ms, const QuadratureSpec& spec) {
    double hi = 0.0;
    for (const auto* m : ms) hi = std::max(hi, m->truncation_point(spec.tail_mass));
    return hi > 0 ? hi : 1.0;
}

inline std::vector<double> common_breaks(std::initializer_list<const UnivariateModel*> ms, double cut) {
    std::vector<double> b;
    for (const auto* m : ms)
        for (double x : m->partition(cut)) b.push_back(x);
    for (const auto* m : ms) {
        if (m->support_lo() > 0 && m->support_lo() < cut) b.push_back(m->support_lo());
        if (std::isfinite(m->support_hi()) && m->support_hi() < cut) b.push_back(m->support_hi());
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

// int_0^cut f, cut and breakpoints taken from the laws
inline double half_line(const Integrand& f, std::initializer_list<const UnivariateModel*> ms, const QuadratureSpec& spec,
                        std::vector<double> extra = {}) {
    const double cut = common_cut(ms, spec);
    IntegrationOptions opt;
    opt.breakpoints = common_breaks(ms, cut);
    for (double x : extra)
        if (x > 0 && x < cut) opt.breakpoints.push_back(x);
    std::sort(opt.breakpoints.begin(), opt.breakpoints.end());
    return integrate_1d(f, 0.0, cut, spec, opt).value;
}

inline double sign_value(bool ok) { return ok ? 1.0 : -1.0; }

// monotonicity condition on phi: nondecreasing on [0, 1/e], nonincreasing on [1/e, 1];
// returns the worst signed derivative (>= 0 when met)
inline double concavity_condition_i(const WeightFunction& phi) {
    const double e1 = std::exp(-1.0);
    double worst = INFINITY;
    for (int k = 1; k <= 200; ++k) {
        const double t = k / 200.0;
        const double d = phi.derivative(t);
        worst = std::min(worst, t <= e1 ? d : -d);
    }
    return worst;
}

// phi'' - (f'/f) phi' at support points of m; returns the largest value (<= 0 when met)
inline double concavity_condition_ii(const WeightFunction& phi, const UnivariateModel& m, const QuadratureSpec& spec) {
    const double lo = m.support_lo();
    double hi = std::min(m.support_hi(), m.truncation_point(spec.tail_mass));
    if (!(hi > lo)) return 0.0;
    double worst = -INFINITY;
    for (int k = 1; k < 200; ++k) {
        const double t = lo + (hi - lo) * k / 200.0;
        const double d1 = phi.derivative(t), d2 = phi.second_derivative(t);
        double g = d2;
        if (d1 != 0.0) {
            const double h = 1e-5 * std::max(1.0, t);
            const double fp = m.pdf(t + h), fm = m.pdf(t - h);
            if (!(fp > 0 && fm > 0)) continue;
            g -= (std::log(fp) - std::log(fm)) / (2 * h) * d1;
        }
        worst = std::max(worst, g);
    }
    return std::isfinite(worst) ? worst : 0.0;
}

// phi within [lo, hi] on probes up to the cut
inline double weight_range_margin(const WeightFunction& phi, double cut, double lo, double hi) {
    double worst = INFINITY;
    for (int k = 0; k <= 400; ++k) {
        const double t = cut * k / 400.0;
        const double v = phi(t);
        if (!std::isfinite(v)) continue;
        worst = std::min({worst, v - lo, hi - v});
    }
    return worst;
}

}  // namespace wcre::detail

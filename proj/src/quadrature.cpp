#include "wcre/quadrature.hpp"

#include "wcre/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <queue>
#include <sstream>

namespace wcre {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0) || !(grid_rel_tol > 0))
        throw DomainError("quadrature tolerances must be positive");
    if (!(tail_mass > 0 && tail_mass < 1))
        throw DomainError("tail_mass must lie in (0, 1)");
    if (max_subdivisions < 1)
        throw DomainError("max_subdivisions must be at least 1");
    if (grid_points_per_dim < 16)
        throw DomainError("grid_points_per_dim must be at least 16");
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
    QuadratureSpec s = *this;
    s.rel_tol *= factor;
    s.abs_tol *= factor;
    return s;
}

namespace {

struct Panel {
    double a, b;
    double value, error;
};

struct PanelLess {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

double checked(const Integrand& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw IntegrandError("integrand is not finite", x);
    return v;
}

Panel gk21(const Integrand& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    const double f0 = checked(f, c);
    double kron = wk[0] * f0;
    double gauss = 0.0;
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double dx = h * xk[i];
        const double s = checked(f, c - dx) + checked(f, c + dx);
        kron += wk[i] * s;
        if (i % 2 == 1) gauss += wg[i / 2] * s;
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

double ordered_sum(std::vector<Panel>& panels, double Panel::*field) {
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double s = 0.0, comp = 0.0;
    for (const auto& p : panels) {
        const double v = p.*field;
        const double t = s + v;
        comp += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
        s = t;
    }
    return s + comp;
}

IntegralResult adaptive(const Integrand& f, std::vector<double> cuts, const QuadratureSpec& spec,
                        bool allow_unconverged) {
    std::priority_queue<Panel, std::vector<Panel>, PanelLess> queue;
    std::vector<Panel> frozen;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        Panel p = gk21(f, cuts[i], cuts[i + 1]);
        total += p.value;
        total_err += p.error;
        queue.push(p);
    }
    int subdivisions = static_cast<int>(queue.size());
    auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };

    while (!queue.empty() && total_err > tolerance()) {
        if (subdivisions >= spec.max_subdivisions) break;
        Panel p = queue.top();
        queue.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b) || (p.b - p.a) < 1e-14 * std::max(1.0, std::abs(mid))) {
            frozen.push_back(p);  // cannot be refined further
            continue;
        }
        Panel l = gk21(f, p.a, mid);
        Panel r = gk21(f, mid, p.b);
        total += l.value + r.value - p.value;
        total_err += l.error + r.error - p.error;
        queue.push(l);
        queue.push(r);
        ++subdivisions;
    }

    std::vector<Panel> all = std::move(frozen);
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    IntegralResult out;
    out.value = ordered_sum(all, &Panel::value);
    out.abs_error_estimate = ordered_sum(all, &Panel::error);
    out.subdivisions_used = std::min(subdivisions, spec.max_subdivisions);
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
    if (out.abs_error_estimate > tol && !allow_unconverged) {
        std::ostringstream msg;
        msg << "adaptive quadrature did not reach tolerance " << tol << " (estimate "
            << out.abs_error_estimate << ") within " << spec.max_subdivisions << " subdivisions";
        throw ConvergenceError(msg.str(), out.value, out.abs_error_estimate);
    }
    return out;
}

std::vector<double> make_cuts(double lo, double hi, const std::vector<double>& breakpoints) {
    std::vector<double> cuts{lo};
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

}  // namespace

double envelope_cut(const Integrand& envelope, double lo, double level) {
    double step = 1.0;
    double x = lo + step;
    while (envelope(x) >= level) {
        step *= 2.0;
        x = lo + step;
        if (!std::isfinite(x) || step > 1e300) throw DomainError("envelope never drops below the tail mass");
    }
    double a = lo + step / 2.0, b = x;
    if (step == 1.0) a = lo;
    for (int i = 0; i < 200 && b - a > 1e-12 * std::max(1.0, b); ++i) {
        const double m = 0.5 * (a + b);
        (envelope(m) >= level ? a : b) = m;
    }
    return b;
}

IntegralResult integrate_1d(const Integrand& f, double lo, double hi, const QuadratureSpec& spec,
                            const IntegrationOptions& opts) {
    spec.validate();
    if (!(lo < hi)) {
        if (lo == hi) return {};
        throw DomainError("integrate_1d requires lo < hi");
    }
    if (std::isfinite(hi)) return adaptive(f, make_cuts(lo, hi, opts.breakpoints), spec, opts.allow_unconverged);

    if (opts.envelope) {
        const double t = envelope_cut(opts.envelope, lo, spec.tail_mass);
        const double cut = lo + 2.0 * (t - lo);
        // geometric ladder so panels near lo stay short
        std::vector<double> bp = opts.breakpoints;
        double scale = std::max((t - lo) / 64.0, 1e-300);
        for (double x = lo + scale; x < cut; x = lo + 2.0 * (x - lo)) bp.push_back(x);
        IntegralResult r = adaptive(f, make_cuts(lo, cut, bp), spec, opts.allow_unconverged);
        r.truncation_point = cut;
        return r;
    }

    // x = lo + t / (1 - t)
    Integrand g = [&](double t) {
        const double u = 1.0 - t;
        const double x = lo + t / u;
        if (!std::isfinite(x)) return 0.0;
        return f(x) / (u * u);
    };
    std::vector<double> bp;
    for (double b : opts.breakpoints)
        if (b > lo) bp.push_back((b - lo) / (1.0 + b - lo));
    return adaptive(g, make_cuts(0.0, 1.0, bp), spec, opts.allow_unconverged);
}

const AxisRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<AxisRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;
    if (n < 1) throw DomainError("Gauss-Legendre order must be positive");

    auto rule = std::make_unique<AxisRule>();
    rule->nodes.resize(n);
    rule->weights.resize(n);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = x;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule->nodes[i] = -x;
        rule->nodes[n - 1 - i] = x;
        rule->weights[i] = w;
        rule->weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule->nodes[n / 2] = 0.0;
    auto& ref = *rule;
    cache.emplace(n, std::move(rule));
    return ref;
}

AxisRule axis_rule(double lo, double hi, int n, std::span<const double> breakpoints) {
    if (!(hi > lo)) throw DomainError("axis_rule requires lo < hi");
    std::vector<double> cuts = make_cuts(lo, hi, {breakpoints.begin(), breakpoints.end()});
    const double span = hi - lo;
    AxisRule out;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double a = cuts[p], b = cuts[p + 1];
        const int m = std::max(8, static_cast<int>(std::lround(n * (b - a) / span)));
        const AxisRule& gl = gauss_legendre(m);
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < m; ++i) {
            out.nodes.push_back(c + h * gl.nodes[i]);
            out.weights.push_back(h * gl.weights[i]);
        }
    }
    return out;
}

namespace {

double tensor_sum(const IntegrandNd& f, const std::vector<AxisRule>& rules) {
    const std::size_t n = rules.size();
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> x(n);
    double total = 0.0;
    // innermost axis summed first, fixed order
    if (n == 2) {
        for (std::size_t i = 0; i < rules[0].nodes.size(); ++i) {
            x[0] = rules[0].nodes[i];
            double row = 0.0;
            for (std::size_t j = 0; j < rules[1].nodes.size(); ++j) {
                x[1] = rules[1].nodes[j];
                const double v = f(x);
                if (!std::isfinite(v)) throw IntegrandError("integrand is not finite", x[1]);
                row += rules[1].weights[j] * v;
            }
            total += rules[0].weights[i] * row;
        }
        return total;
    }
    for (std::size_t i = 0; i < rules[0].nodes.size(); ++i) {
        x[0] = rules[0].nodes[i];
        double slab = 0.0;
        for (std::size_t j = 0; j < rules[1].nodes.size(); ++j) {
            x[1] = rules[1].nodes[j];
            double row = 0.0;
            for (std::size_t k = 0; k < rules[2].nodes.size(); ++k) {
                x[2] = rules[2].nodes[k];
                const double v = f(x);
                if (!std::isfinite(v)) throw IntegrandError("integrand is not finite", x[2]);
                row += rules[2].weights[k] * v;
            }
            slab += rules[1].weights[j] * row;
        }
        total += rules[0].weights[i] * slab;
    }
    return total;
}

}  // namespace

IntegralResult integrate_nd(const IntegrandNd& f, const std::vector<AxisSpec>& box, const QuadratureSpec& spec) {
    spec.validate();
    if (box.size() != 2 && box.size() != 3) throw DomainError("integrate_nd supports dimension 2 or 3");
    std::vector<double> hi(box.size());
    for (std::size_t d = 0; d < box.size(); ++d) {
        hi[d] = box[d].hi;
        if (!std::isfinite(hi[d])) {
            if (!box[d].envelope) throw DomainError("infinite axis requires an envelope");
            const double t = envelope_cut(box[d].envelope, box[d].lo, spec.tail_mass);
            hi[d] = box[d].lo + 2.0 * (t - box[d].lo);
        }
        if (!(hi[d] > box[d].lo)) throw DomainError("empty integration box");
    }
    auto rules_at = [&](int n) {
        std::vector<AxisRule> rules;
        for (std::size_t d = 0; d < box.size(); ++d) rules.push_back(axis_rule(box[d].lo, hi[d], n, box[d].breakpoints));
        return rules;
    };
    const int n = spec.grid_points_per_dim;
    const double full = tensor_sum(f, rules_at(n));
    const double half = tensor_sum(f, rules_at(n / 2));
    IntegralResult out;
    out.value = full;
    out.abs_error_estimate = std::abs(full - half);
    out.subdivisions_used = 1;
    out.truncation_point = *std::max_element(hi.begin(), hi.end());
    const double tol = std::max(spec.abs_tol, spec.grid_rel_tol * std::abs(full));
    if (out.abs_error_estimate > tol) {
        std::ostringstream msg;
        msg << "tensor grid did not settle: full/half difference " << out.abs_error_estimate << " exceeds " << tol;
        throw ConvergenceError(msg.str(), full, out.abs_error_estimate);
    }
    return out;
}

}  // namespace wcre

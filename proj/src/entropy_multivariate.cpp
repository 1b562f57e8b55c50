#include "wcre/entropy_multivariate.hpp"

#include "wcre/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace wcre {

JointWeight JointWeight::constant(double c) {
    if (!(c >= 0) || !std::isfinite(c)) throw DomainError("joint weight constant must be finite and nonnegative");
    JointWeight w;
    w.scale_ = c;
    return w;
}

JointWeight JointWeight::product(std::vector<WeightFunction> factors, double scale) {
    if (!(scale >= 0) || !std::isfinite(scale)) throw DomainError("joint weight scale must be finite and nonnegative");
    if (factors.size() > 3) throw DomainError("joint weight supports at most 3 factors");
    JointWeight w;
    w.scale_ = scale;
    w.factors_ = std::move(factors);
    return w;
}

JointWeight JointWeight::from_univariate(const WeightFunction& w, int n) {
    if (w.is_constant()) return constant(w.coefficient());
    return product(std::vector<WeightFunction>(static_cast<std::size_t>(n), w));
}

double JointWeight::operator()(std::span<const double> x) const {
    double v = scale_;
    for (std::size_t i = 0; i < factors_.size() && v != 0.0; ++i) v *= factors_[i](x[i]);
    return v;
}

double JointWeight::factor(int i, double x) const {
    if (factors_.empty()) return 1.0;
    return factors_.at(static_cast<std::size_t>(i))(x);
}

WeightFunction JointWeight::marginal_factor(int i) const {
    WeightFunction f = factors_.empty() ? WeightFunction::constant(1.0) : factors_.at(static_cast<std::size_t>(i));
    return i == 0 ? f.scaled(scale_) : f;
}

JointWeight JointWeight::scaled(double c) const {
    JointWeight w = *this;
    w.scale_ *= c;
    return w;
}

double JointWeight::min_value_on(std::span<const double> probes, int n) const {
    if (factors_.empty()) return scale_;
    double lo = scale_;
    for (int i = 0; i < n; ++i) {
        double m = INFINITY;
        for (double x : probes) m = std::min(m, factor(i, x));
        lo *= m;
    }
    return lo;
}

std::vector<double> grid_breakpoints(const UnivariateModel& m, double cut) {
    std::vector<double> out;
    auto add = [&](double b) {
        if (b > 0 && b < cut) out.push_back(b);
    };
    for (double b : m.breakpoints()) add(b);
    add(m.support_lo());
    if (std::isfinite(m.support_hi())) add(m.support_hi());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SurvivalGrid::SurvivalGrid(const MultivariateModel& m, const QuadratureSpec& spec, int points_per_dim) : n_(m.dim()) {
    spec.validate();
    const int pts = points_per_dim > 0 ? points_per_dim : spec.grid_points_per_dim;
    for (int i = 0; i < n_; ++i) {
        double cut = m.truncation_point(i, spec.tail_mass);
        if (!(cut > 0)) cut = 1.0;
        const auto br = grid_breakpoints(m.marginal(i), cut);
        axes_.push_back(axis_rule(0.0, cut, pts, br));
        cuts_.push_back(cut);
    }
    sf_.assign(1u << n_, {});
    sf_[0] = {1.0};
    for (unsigned mask = 1; mask <= full_mask(); ++mask) {
        auto& t = sf_[mask];
        t.resize(count(mask));
        std::array<double, 3> x{0.0, 0.0, 0.0};
        sum(mask, [&](const Index& idx) {
            for (int a = 0; a < n_; ++a) x[static_cast<std::size_t>(a)] = (mask >> a) & 1u ? node(a, idx[static_cast<std::size_t>(a)]) : 0.0;
            t[offset(mask, idx)] = std::clamp(m.subset_sf(mask, std::span<const double>(x.data(), static_cast<std::size_t>(n_))), 0.0, 1.0);
            return 0.0;
        });
    }
}

std::size_t SurvivalGrid::offset(unsigned mask, const Index& idx) const {
    std::size_t off = 0;
    for (int a = 0; a < n_; ++a)
        if ((mask >> a) & 1u) off = off * static_cast<std::size_t>(size(a)) + static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
    return off;
}

std::size_t SurvivalGrid::count(unsigned mask) const {
    std::size_t c = 1;
    for (int a = 0; a < n_; ++a)
        if ((mask >> a) & 1u) c *= static_cast<std::size_t>(size(a));
    return c;
}

double SurvivalGrid::sum(unsigned mask, const std::function<double(const Index&)>& f) const {
    std::vector<int> ax;
    for (int a = 0; a < n_; ++a)
        if ((mask >> a) & 1u) ax.push_back(a);
    Index idx{0, 0, 0};
    if (ax.empty()) return f(idx);
    double total = 0.0;
    const auto k = ax.size();
    while (true) {
        double w = 1.0;
        for (int a : ax) w *= axes_[static_cast<std::size_t>(a)].weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
        const double v = f(idx);
        if (v != 0.0) total += w * v;
        std::size_t d = k;
        while (d > 0) {
            const auto a = static_cast<std::size_t>(ax[d - 1]);
            if (++idx[a] < size(ax[d - 1])) break;
            idx[a] = 0;
            --d;
        }
        if (d == 0) break;
    }
    return total;
}

unsigned Reduction::keep_mask() const {
    switch (kind) {
        case Kind::psi_ij: return (1u << i) | (1u << j);
        default: return 1u << i;
    }
}

std::string Reduction::tag() const {
    switch (kind) {
        case Kind::psi_i: return "psi_" + std::to_string(i + 1);
        case Kind::psi_ij: return "psi_" + std::to_string(i + 1) + std::to_string(j + 1);
        case Kind::psi_i_rest: return "psi_" + std::to_string(i + 1) + "_rest";
    }
    return "psi";
}

GridTensor weight_tensor(const SurvivalGrid& g, const JointWeight& phi) {
    GridTensor t{g.full_mask(), std::vector<double>(g.count(g.full_mask()))};
    std::array<double, 3> x{};
    g.sum(g.full_mask(), [&](const SurvivalGrid::Index& idx) {
        for (int a = 0; a < g.dim(); ++a) x[static_cast<std::size_t>(a)] = g.node(a, idx[static_cast<std::size_t>(a)]);
        t.values[g.offset(t.mask, idx)] = phi(std::span<const double>(x.data(), static_cast<std::size_t>(g.dim())));
        return 0.0;
    });
    return t;
}

GridTensor reduce_weight(const SurvivalGrid& g, const GridTensor& phi, unsigned keep) {
    if (phi.mask != g.full_mask()) throw DomainError("reduce_weight needs a weight on the full grid");
    if ((keep & ~g.full_mask()) != 0u || keep == 0u) throw DomainError("reduction keeps an invalid coordinate set");
    GridTensor out{keep, std::vector<double>(g.count(keep), 0.0)};
    const unsigned rest = g.full_mask() & ~keep;
    // iterate kept nodes, integrate the rest
    g.sum(keep, [&](const SurvivalGrid::Index& kidx) {
        const double sk = g.sf(keep, kidx);
        if (sk <= 0.0) return 0.0;
        const double v = g.sum(rest, [&](const SurvivalGrid::Index& ridx) {
            SurvivalGrid::Index idx{};
            for (int a = 0; a < g.dim(); ++a) {
                const auto s = static_cast<std::size_t>(a);
                idx[s] = (keep >> a) & 1u ? kidx[s] : ridx[s];
            }
            return phi.at(g, idx) * g.sf(g.full_mask(), idx);
        });
        out.values[g.offset(keep, kidx)] = v / sk;
        return 0.0;
    });
    return out;
}

double grid_entropy(const SurvivalGrid& g, const GridTensor& w, unsigned cond) {
    if ((cond & ~w.mask) != 0u) throw DomainError("conditioning set must lie inside the joint set");
    return g.sum(w.mask, [&](const SurvivalGrid::Index& idx) {
        const double s = g.sf(w.mask, idx);
        if (s <= 0.0) return 0.0;
        const double c = cond ? g.sf(cond, idx) : 1.0;
        if (c <= 0.0) return 0.0;
        const double r = s / c;
        if (r >= 1.0) return 0.0;
        return -w.at(g, idx) * s * std::log(r);
    });
}

double grid_mutual(const SurvivalGrid& g, const GridTensor& w, const std::vector<unsigned>& parts) {
    return g.sum(w.mask, [&](const SurvivalGrid::Index& idx) {
        const double s = g.sf(w.mask, idx);
        if (s <= 0.0) return 0.0;
        double lp = 0.0;
        for (unsigned p : parts) lp += std::log(g.sf(p, idx));
        return w.at(g, idx) * s * (std::log(s) - lp);
    });
}

double grid_integral(const SurvivalGrid& g, const GridTensor& w,
                     const std::function<double(const SurvivalGrid::Index&)>& h) {
    return g.sum(w.mask, [&](const SurvivalGrid::Index& idx) {
        const double a = w.at(g, idx);
        return a == 0.0 ? 0.0 : a * h(idx);
    });
}

namespace {

std::vector<AxisSpec> box_of(const MultivariateModel& m, const QuadratureSpec& spec) {
    std::vector<AxisSpec> box;
    for (int i = 0; i < m.dim(); ++i) {
        double cut = m.truncation_point(i, spec.tail_mass);
        if (!(cut > 0)) cut = 1.0;
        box.push_back({0.0, cut, grid_breakpoints(m.marginal(i), cut), {}});
    }
    return box;
}

// per-marginal tail test standing in for a joint divergence certificate
void marginal_divergence_check(const MultivariateModel& m, const JointWeight& phi, const QuadratureSpec& spec) {
    for (int i = 0; i < m.dim(); ++i) {
        if (std::isfinite(m.marginal(i).support_hi())) continue;
        const WeightFunction f = phi.is_constant() ? WeightFunction::constant(1.0) : phi.factors().at(static_cast<std::size_t>(i));
        wcre(m.marginal(i), f, spec);
    }
}

EntropyValue nd_value(const IntegrandNd& f, const MultivariateModel& m, const QuadratureSpec& spec) {
    EntropyValue out;
    out.quadrature = integrate_nd(f, box_of(m, spec), spec);
    out.value = out.quadrature.value;
    return out;
}

void check_weight(const MultivariateModel& m, const JointWeight& phi) {
    if (!phi.is_constant() && static_cast<int>(phi.factors().size()) != m.dim())
        throw DomainError("product weight needs one factor per coordinate");
}

}  // namespace

EntropyValue joint_wcre(const MultivariateModel& m, const JointWeight& phi, const QuadratureSpec& spec) {
    spec.validate();
    check_weight(m, phi);
    marginal_divergence_check(m, phi, spec);
    return nd_value(
        [&](std::span<const double> x) {
            const double w = phi(x);
            if (w == 0.0) return 0.0;
            const double s = m.sf(x);
            if (s <= 0.0 || s >= 1.0) return 0.0;
            return -w * s * std::log(s);
        },
        m, spec);
}

EntropyValue joint_wce(const MultivariateModel& m, const JointWeight& phi, const QuadratureSpec& spec) {
    spec.validate();
    check_weight(m, phi);
    return nd_value(
        [&](std::span<const double> x) {
            const double w = phi(x);
            if (w == 0.0) return 0.0;
            const double c = std::clamp(m.cdf(x), 0.0, 1.0);
            if (c <= 0.0 || c >= 1.0) return 0.0;
            return -w * c * std::log(c);
        },
        m, spec);
}

EntropyValue conditional_wcre(const MultivariateModel& m, const JointWeight& phi, const QuadratureSpec& spec) {
    spec.validate();
    if (m.dim() != 2) throw DomainError("conditional_wcre needs a bivariate model");
    check_weight(m, phi);
    marginal_divergence_check(m, phi, spec);
    return nd_value(
        [&](std::span<const double> x) {
            const double w = phi(x);
            if (w == 0.0) return 0.0;
            const double s = m.sf(x);
            const double s2 = m.marginal(1).sf(x[1]);
            if (s <= 0.0 || s2 <= 0.0 || s >= s2) return 0.0;
            return -w * s * std::log(s / s2);
        },
        m, spec);
}

EntropyValue mutual_wcre(const MultivariateModel& m, const JointWeight& phi, const QuadratureSpec& spec) {
    spec.validate();
    check_weight(m, phi);
    marginal_divergence_check(m, phi, spec);
    return nd_value(
        [&](std::span<const double> x) {
            const double w = phi(x);
            if (w == 0.0) return 0.0;
            const double s = m.sf(x);
            if (s <= 0.0) return 0.0;
            double lp = 0.0;
            for (int i = 0; i < m.dim(); ++i) lp += m.marginal(i).log_sf(x[static_cast<std::size_t>(i)]);
            return w * s * (std::log(s) - lp);
        },
        m, spec);
}

DerivedWeight derived_weight(const MultivariateModel& m, const JointWeight& phi, const Reduction& r,
                             const QuadratureSpec& spec) {
    check_weight(m, phi);
    const int n = m.dim();
    if (r.i < 0 || r.i >= n) throw DomainError("reduction index out of range");
    if (r.kind == Reduction::Kind::psi_ij && (r.j < 0 || r.j >= n || r.j == r.i))
        throw DomainError("psi_ij needs two distinct coordinates");
    if (r.kind == Reduction::Kind::psi_ij && n != 3) throw DomainError("psi_ij needs a trivariate model");
    if (r.kind == Reduction::Kind::psi_i_rest && n != 3) throw DomainError("psi_i_rest needs a trivariate model");
    const SurvivalGrid g(m, spec);
    DerivedWeight out;
    out.tag = r.tag();
    out.weight = reduce_weight(g, weight_tensor(g, phi), r.keep_mask());
    return out;
}

Decomposition independent_decomposition(const MultivariateModel& m, const JointWeight& phi,
                                        const QuadratureSpec& spec) {
    if (m.family() != MultivariateModel::Family::independent)
        throw DomainError("independent_decomposition needs an independent product model");
    check_weight(m, phi);
    const int n = m.dim();
    std::vector<WeightFunction> f;
    for (int i = 0; i < n; ++i)
        f.push_back(phi.is_constant() ? WeightFunction::constant(1.0) : phi.factors()[static_cast<std::size_t>(i)]);
    std::vector<double> mean(static_cast<std::size_t>(n)), ent(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto s = static_cast<std::size_t>(i);
        mean[s] = psi_mean(m.marginal(i), f[s], spec);
        ent[s] = wcre(m.marginal(i), f[s], spec).value;
    }
    Decomposition d;
    for (int i = 0; i < n; ++i) {
        double part = phi.scale() * ent[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j)
            if (j != i) part *= mean[static_cast<std::size_t>(j)];
        d.parts.push_back(part);
        d.total += part;
    }
    return d;
}

}  // namespace wcre

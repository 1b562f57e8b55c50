#include "wcre/multivariate.hpp"

#include "wcre/errors.hpp"
#include "wcre/gaussian.hpp"

#include <algorithm>
#include <bit>
#include <numbers>
#include <cmath>

namespace wcre {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

// v-space quantile of the FGM conditional: solves v + k v (1 - v) = w
double fgm_conditional_v(double w, double k) {
    const double b = 1.0 + k;
    return 2.0 * w / (b + std::sqrt(std::max(0.0, b * b - 4.0 * k * w)));
}

double chain_density(double t12, double t23, double v1, double v2, double v3) {
    const double g1 = 1.0 - 2.0 * v1, g2 = 1.0 - 2.0 * v2, g3 = 1.0 - 2.0 * v3;
    const double h2 = (1.0 - v2) * (1.0 - 3.0 * v2);
    return 1.0 + t12 * g1 * g2 + t23 * g2 * g3 + t12 * t23 * g1 * g3 * h2;
}

}  // namespace

MultivariateModel MultivariateModel::independent(std::vector<UnivariateModel> marginals) {
    require(marginals.size() == 2 || marginals.size() == 3, "independent product needs 2 or 3 marginals");
    MultivariateModel m;
    m.family_ = Family::independent;
    m.marginals_ = std::move(marginals);
    return m;
}

MultivariateModel MultivariateModel::gaussian(std::vector<double> mean, Eigen::MatrixXd cov) {
    require(mean.size() == 2 || mean.size() == 3, "gaussian model needs dimension 2 or 3");
    require(cov.rows() == static_cast<Eigen::Index>(mean.size()), "mean/covariance dimension mismatch");
    require_spd(cov);
    MultivariateModel m;
    m.family_ = Family::gaussian;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        m.marginals_.push_back(UnivariateModel::gaussian(mean[i], std::sqrt(cov(ii, ii))));
    }
    m.mean_ = std::move(mean);
    m.cov_ = std::move(cov);
    m.chol_ = Eigen::LLT<Eigen::MatrixXd>(m.cov_).matrixL();
    return m;
}

MultivariateModel MultivariateModel::fgm(double theta, UnivariateModel m1, UnivariateModel m2) {
    require(std::isfinite(theta) && std::abs(theta) <= 1.0, "fgm theta must lie in [-1, 1]");
    MultivariateModel m;
    m.family_ = Family::fgm;
    m.marginals_ = {std::move(m1), std::move(m2)};
    m.theta_ = {theta};
    m.validate_copula();
    return m;
}

MultivariateModel MultivariateModel::fgm3(double t12, double t13, double t23, UnivariateModel m1, UnivariateModel m2,
                                          UnivariateModel m3) {
    for (double t : {t12, t13, t23}) require(std::isfinite(t) && std::abs(t) <= 1.0, "fgm3 thetas must lie in [-1, 1]");
    MultivariateModel m;
    m.family_ = Family::fgm3;
    m.marginals_ = {std::move(m1), std::move(m2), std::move(m3)};
    m.theta_ = {t12, t13, t23};
    m.validate_copula();
    return m;
}

MultivariateModel MultivariateModel::fgm_chain(double t12, double t23, UnivariateModel m1, UnivariateModel m2,
                                               UnivariateModel m3) {
    for (double t : {t12, t23}) require(std::isfinite(t) && std::abs(t) <= 1.0, "fgm_chain thetas must lie in [-1, 1]");
    MultivariateModel m;
    m.family_ = Family::fgm_chain;
    m.marginals_ = {std::move(m1), std::move(m2), std::move(m3)};
    m.theta_ = {t12, t23};
    m.validate_copula();
    return m;
}

void MultivariateModel::validate_copula() {
    double lo = 1.0;
    if (family_ == Family::fgm) {
        lo = 1.0 - std::abs(theta_[0]);
    } else if (family_ == Family::fgm3) {
        // multilinear in g, so the corners bound it
        for (int c = 0; c < 8; ++c) {
            const double g1 = (c & 1) ? 1.0 : -1.0, g2 = (c & 2) ? 1.0 : -1.0, g3 = (c & 4) ? 1.0 : -1.0;
            lo = std::min(lo, 1.0 + theta_[0] * g1 * g2 + theta_[1] * g1 * g3 + theta_[2] * g2 * g3);
        }
    } else if (family_ == Family::fgm_chain) {
        for (int i = 0; i <= 2000; ++i) {
            const double v2 = i / 2000.0;
            for (double v1 : {0.0, 1.0})
                for (double v3 : {0.0, 1.0}) lo = std::min(lo, chain_density(theta_[0], theta_[1], v1, v2, v3));
        }
    }
    density_min_ = lo;
    require(lo >= -1e-12, "copula parameters give a negative density");
}

std::string MultivariateModel::family_name() const {
    switch (family_) {
        case Family::independent: return "independent";
        case Family::gaussian: return "gaussian";
        case Family::fgm: return "fgm";
        case Family::fgm3: return "fgm3";
        case Family::fgm_chain: return "fgm_chain";
    }
    return "unknown";
}

bool MultivariateModel::absolutely_continuous() const {
    if (family_ == Family::gaussian) return false;
    return std::all_of(marginals_.begin(), marginals_.end(), [](const auto& m) { return m.absolutely_continuous(); });
}

bool MultivariateModel::improper() const {
    return std::any_of(marginals_.begin(), marginals_.end(), [](const auto& m) { return m.improper(); });
}

double MultivariateModel::copula_sf(std::span<const double> v) const {
    const std::size_t n = marginals_.size();
    require(v.size() == n, "copula_sf: dimension mismatch");
    double p = 1.0;
    for (double x : v) p *= x;
    if (p == 0.0) return 0.0;
    switch (family_) {
        case Family::independent: return p;
        case Family::fgm: return p * (1.0 + theta_[0] * (1.0 - v[0]) * (1.0 - v[1]));
        case Family::fgm3: {
            const double a1 = 1.0 - v[0], a2 = 1.0 - v[1], a3 = 1.0 - v[2];
            return p * (1.0 + theta_[0] * a1 * a2 + theta_[1] * a1 * a3 + theta_[2] * a2 * a3);
        }
        case Family::fgm_chain: {
            const double a1 = 1.0 - v[0], a2 = 1.0 - v[1], a3 = 1.0 - v[2];
            return p * (1.0 + theta_[0] * a1 * a2) * (1.0 + theta_[1] * a2 * a3);
        }
        case Family::gaussian: break;
    }
    throw DomainError("gaussian model has no survival copula here");
}

double MultivariateModel::copula_density(std::span<const double> v) const {
    switch (family_) {
        case Family::independent: return 1.0;
        case Family::fgm: return 1.0 + theta_[0] * (1.0 - 2.0 * v[0]) * (1.0 - 2.0 * v[1]);
        case Family::fgm3: {
            const double g1 = 1.0 - 2.0 * v[0], g2 = 1.0 - 2.0 * v[1], g3 = 1.0 - 2.0 * v[2];
            return 1.0 + theta_[0] * g1 * g2 + theta_[1] * g1 * g3 + theta_[2] * g2 * g3;
        }
        case Family::fgm_chain: return chain_density(theta_[0], theta_[1], v[0], v[1], v[2]);
        case Family::gaussian: break;
    }
    throw DomainError("gaussian model has no survival copula here");
}

double MultivariateModel::subset_sf(unsigned mask, std::span<const double> x) const {
    const std::size_t n = marginals_.size();
    require(x.size() == n, "sf: dimension mismatch");
    mask &= (1u << n) - 1u;
    if (mask == 0) return 1.0;
    if (std::popcount(mask) == 1) {
        const int i = std::countr_zero(mask);
        return marginals_[static_cast<std::size_t>(i)].sf(x[static_cast<std::size_t>(i)]);
    }
    if (family_ == Family::gaussian) {
        std::vector<double> mu, pt;
        std::vector<Eigen::Index> keep;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                keep.push_back(static_cast<Eigen::Index>(i));
                mu.push_back(mean_[i]);
                pt.push_back(std::max(0.0, x[i]));
            }
        const auto k = static_cast<Eigen::Index>(keep.size());
        Eigen::MatrixXd sub(k, k);
        for (Eigen::Index a = 0; a < k; ++a)
            for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = cov_(keep[a], keep[b]);
        return gaussian_orthant(mu, sub, pt);
    }
    std::array<double, 3> v{1.0, 1.0, 1.0};
    for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) v[i] = marginals_[i].sf(x[i]);
    return copula_sf(std::span<const double>(v.data(), n));
}

double MultivariateModel::sf(std::span<const double> x) const { return subset_sf((1u << marginals_.size()) - 1u, x); }

double MultivariateModel::cdf(std::span<const double> x) const {
    const unsigned n = static_cast<unsigned>(marginals_.size());
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const double s = subset_sf(mask, x);
        total += (std::popcount(mask) % 2 == 0) ? s : -s;
    }
    return std::clamp(total, 0.0, 1.0);
}

double MultivariateModel::density(std::span<const double> x) const {
    const std::size_t n = marginals_.size();
    require(x.size() == n, "density: dimension mismatch");
    for (double xi : x)
        if (xi < 0) return 0.0;
    if (family_ == Family::gaussian) {
        Eigen::VectorXd d(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) d(static_cast<Eigen::Index>(i)) = x[i] - mean_[i];
        const Eigen::VectorXd z = Eigen::LLT<Eigen::MatrixXd>(cov_).solve(d);
        return std::exp(-0.5 * d.dot(z)) / std::sqrt(std::pow(2.0 * std::numbers::pi, static_cast<double>(n)) * cov_.determinant());
    }
    std::array<double, 3> v{};
    double f = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = marginals_[i].sf(x[i]);
        f *= marginals_[i].pdf(x[i]);
    }
    if (f == 0.0) return 0.0;
    return f * copula_density(std::span<const double>(v.data(), n));
}

double MultivariateModel::conditional_sf(double x1, double x2) const {
    require(marginals_.size() == 2, "conditional_sf needs a bivariate model");
    const double s2 = marginals_[1].sf(x2);
    if (s2 <= 0) throw DomainError("conditional_sf: conditioning event has zero probability");
    const std::array<double, 2> x{x1, x2};
    return sf(x) / s2;
}

double MultivariateModel::copula_sample_bound() const {
    switch (family_) {
        case Family::fgm3: return 1.0 + std::abs(theta_[0]) + std::abs(theta_[1]) + std::abs(theta_[2]);
        case Family::fgm_chain:
            return 1.0 + std::abs(theta_[0]) + std::abs(theta_[1]) + std::abs(theta_[0] * theta_[1]);
        default: return 1.0;
    }
}

std::vector<std::vector<double>> MultivariateModel::sample_n(std::size_t count, std::uint64_t seed,
                                                             std::uint64_t stream) const {
    const std::size_t n = marginals_.size();
    CounterRng rng(seed, stream);
    std::vector<std::vector<double>> out(count, std::vector<double>(n));
    const double bound = copula_sample_bound();
    for (auto& row : out) {
        if (family_ == Family::gaussian) {
            Eigen::VectorXd z(static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i)) = rng.normal();
            const Eigen::VectorXd y = chol_ * z;
            for (std::size_t i = 0; i < n; ++i) row[i] = std::max(0.0, mean_[i] + y(static_cast<Eigen::Index>(i)));
            continue;
        }
        std::array<double, 3> v{};
        if (family_ == Family::independent) {
            for (std::size_t i = 0; i < n; ++i) v[i] = rng.uniform();
        } else if (family_ == Family::fgm) {
            v[0] = rng.uniform();
            v[1] = fgm_conditional_v(rng.uniform(), theta_[0] * (1.0 - 2.0 * v[0]));
        } else {
            // rejection in v-space
            for (;;) {
                for (std::size_t i = 0; i < n; ++i) v[i] = rng.uniform();
                if (rng.uniform() * bound <= copula_density(std::span<const double>(v.data(), n))) break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) row[i] = marginals_[i].isf(std::clamp(v[i], 0.0, 1.0));
    }
    return out;
}

double MultivariateModel::truncation_point(int axis, double tail_mass) const {
    return marginal(axis).truncation_point(tail_mass);
}

std::vector<double> MultivariateModel::partition(int axis, double cut) const { return marginal(axis).partition(cut); }

}  // namespace wcre

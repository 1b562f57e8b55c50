#include "wcre/kernel.hpp"

#include "wcre/errors.hpp"
#include "wcre/gaussian.hpp"

#include <algorithm>
#include <cmath>

namespace wcre {

namespace {

class KernelOutputFamily : public UnivariateFamily {
public:
    KernelOutputFamily(StochasticKernel k, UnivariateModel in, QuadratureSpec spec)
        : k_(std::move(k)), in_(std::move(in)), spec_(spec.tightened(0.01)) {
        breaks_ = k_.breakpoints();
        for (double b : in_.breakpoints()) breaks_.push_back(b);
    }
    std::string name() const override { return "kernel_output"; }
    ParamList params() const override { return {}; }

    double sf(double x) const override {
        if (x < 0) return 1.0;
        return std::clamp(in_.expect([&](double u) { return k_.tail(u, x); }, spec_, breaks_), 0.0, 1.0);
    }
    double cdf(double x) const override { return 1.0 - sf(x); }
    double pdf(double x) const override {
        if (x < 0) return 0.0;
        return in_.expect([&](double u) { return k_.density(u, x); }, spec_, breaks_);
    }
    double quantile(double u) const override {
        double lo = 0.0, hi = 1.0;
        while (cdf(hi) < u) {
            hi *= 2.0;
            if (hi > 1e300) return INFINITY;
        }
        for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++i) {
            const double m = 0.5 * (lo + hi);
            (cdf(m) < u ? lo : hi) = m;
        }
        return hi;
    }
    double support_lo() const override { return 0.0; }
    double support_hi() const override {
        return k_.kind() == StochasticKernel::Kind::grid_matrix ? k_.edges().back() : INFINITY;
    }
    std::vector<double> breakpoints() const override {
        return k_.kind() == StochasticKernel::Kind::grid_matrix ? k_.edges() : std::vector<double>{};
    }

private:
    StochasticKernel k_;
    UnivariateModel in_;
    QuadratureSpec spec_;
    std::vector<double> breaks_;
};

}  // namespace

StochasticKernel StochasticKernel::gaussian_smoothing(double bandwidth) {
    if (!(bandwidth > 0) || !std::isfinite(bandwidth)) throw DomainError("kernel bandwidth must be positive");
    StochasticKernel k;
    k.kind_ = Kind::gaussian_smoothing;
    k.h_ = bandwidth;
    return k;
}

StochasticKernel StochasticKernel::grid_matrix(std::vector<double> edges, Eigen::MatrixXd rows) {
    const auto m = static_cast<Eigen::Index>(edges.size()) - 1;
    if (m < 1) throw DomainError("grid kernel needs at least two edges");
    if (rows.rows() != m || rows.cols() != m) throw DomainError("grid kernel matrix must be cells x cells");
    if (edges.front() < 0) throw DomainError("grid kernel edges must be nonnegative");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1])) throw DomainError("grid kernel edges must increase");
    if (!rows.allFinite() || rows.minCoeff() < 0) throw DomainError("grid kernel entries must be nonnegative");
    for (Eigen::Index r = 0; r < m; ++r)
        if (std::abs(rows.row(r).sum() - 1.0) > 1e-12) throw DomainError("grid kernel rows must sum to 1");
    StochasticKernel k;
    k.kind_ = Kind::grid_matrix;
    k.edges_ = std::move(edges);
    k.m_ = std::move(rows);
    return k;
}

std::string StochasticKernel::kind_name() const {
    return kind_ == Kind::gaussian_smoothing ? "gaussian_smoothing" : "grid_matrix";
}

int StochasticKernel::cell(double u) const {
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), u);
    const int c = static_cast<int>(it - edges_.begin()) - 1;
    return std::clamp(c, 0, static_cast<int>(edges_.size()) - 2);
}

double StochasticKernel::density(double u, double x) const {
    if (x < 0) return 0.0;
    if (kind_ == Kind::gaussian_smoothing) {
        const double norm = 1.0 - normal_q(u / h_);
        return normal_pdf((x - u) / h_) / (h_ * norm);
    }
    if (x < edges_.front() || x >= edges_.back()) return 0.0;
    const int j = cell(x);
    return m_(cell(u), j) / (edges_[j + 1] - edges_[j]);
}

double StochasticKernel::tail(double u, double x) const {
    if (x <= 0) return 1.0;
    if (kind_ == Kind::gaussian_smoothing) return std::min(1.0, normal_q((x - u) / h_) / (1.0 - normal_q(u / h_)));
    const int r = cell(u);
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < edges_.size(); ++j) {
        const double a = edges_[j], b = edges_[j + 1];
        if (x <= a) s += m_(r, static_cast<Eigen::Index>(j));
        else if (x < b) s += m_(r, static_cast<Eigen::Index>(j)) * (b - x) / (b - a);
    }
    return std::clamp(s, 0.0, 1.0);
}

std::vector<double> StochasticKernel::breakpoints() const { return kind_ == Kind::grid_matrix ? edges_ : std::vector<double>{}; }

double StochasticKernel::normalization_defect(std::span<const double> probes, const QuadratureSpec& spec) const {
    double worst = 0.0;
    for (double u : probes) {
        IntegrationOptions opt;
        double hi = INFINITY;
        if (kind_ == Kind::gaussian_smoothing) {
            opt.envelope = [&](double x) { return tail(u, x); };
        } else {
            hi = edges_.back();
            opt.breakpoints = edges_;
        }
        const double lo = kind_ == Kind::grid_matrix ? edges_.front() : 0.0;
        const double v = integrate_1d([&](double x) { return density(u, x); }, lo, hi, spec, opt).value;
        worst = std::max(worst, std::abs(v - 1.0));
    }
    return worst;
}

double StochasticKernel::transformed_weight(const WeightFunction& phi, double u, const QuadratureSpec& spec) const {
    IntegrationOptions opt;
    double lo = 0.0, hi = INFINITY;
    if (kind_ == Kind::gaussian_smoothing) {
        opt.envelope = [&](double x) { return tail(u, x); };
        if (u > 0) opt.breakpoints = {u};
    } else {
        lo = edges_.front();
        hi = edges_.back();
        opt.breakpoints = edges_;
    }
    return integrate_1d([&](double x) { return phi(x) * density(u, x); }, lo, hi, spec, opt).value;
}

UnivariateModel StochasticKernel::push_forward(const UnivariateModel& m, const QuadratureSpec& spec) const {
    return UnivariateModel::from_family(std::make_shared<KernelOutputFamily>(*this, m, spec));
}

}  // namespace wcre

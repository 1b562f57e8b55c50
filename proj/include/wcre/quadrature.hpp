#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace wcre {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    double tail_mass = 1e-10;
    int grid_points_per_dim = 256;
    // acceptance threshold for the full-vs-half grid comparison
    double grid_rel_tol = 1e-5;

    void validate() const;
    QuadratureSpec tightened(double factor) const;
};

struct IntegralResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    int subdivisions_used = 0;
    std::optional<double> truncation_point;
};

using Integrand = std::function<double(double)>;
using IntegrandNd = std::function<double(std::span<const double>)>;

struct IntegrationOptions {
    // monotone survival-type envelope used to truncate an infinite upper limit
    Integrand envelope;
    // interior points where the integrand may be non-smooth
    std::vector<double> breakpoints;
    // when set, reaching max_subdivisions returns the best estimate instead of throwing
    bool allow_unconverged = false;
};

IntegralResult integrate_1d(const Integrand& f, double lo, double hi,
                            const QuadratureSpec& spec = {},
                            const IntegrationOptions& opts = {});

// Point where a monotone envelope first drops below `level`, searched from lo.
double envelope_cut(const Integrand& envelope, double lo, double level);

struct AxisRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights on [-1, 1]; cached, thread-safe.
const AxisRule& gauss_legendre(int n);

// Composite Gauss-Legendre on [lo, hi], split at breakpoints, about n nodes.
AxisRule axis_rule(double lo, double hi, int n, std::span<const double> breakpoints = {});

struct AxisSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> breakpoints;
    Integrand envelope;  // used only when hi is infinite
};

IntegralResult integrate_nd(const IntegrandNd& f, const std::vector<AxisSpec>& box,
                            const QuadratureSpec& spec = {});

}  // namespace wcre

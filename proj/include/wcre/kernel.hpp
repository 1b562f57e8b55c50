#pragma once

#include "wcre/quadrature.hpp"
#include "wcre/univariate.hpp"
#include "wcre/weight.hpp"

#include <Eigen/Dense>

#include <vector>

namespace wcre {

// Markov kernel Pi(u, x) on [0, inf).
//  gaussian_smoothing(h): normal density in x centred at u, truncated to x >= 0 and renormalized
//  grid_matrix(edges, M): piecewise constant, Pi(u, x) = M(cell(u), cell(x)) / width(cell(x))
class StochasticKernel {
public:
    enum class Kind { gaussian_smoothing, grid_matrix };

    static StochasticKernel gaussian_smoothing(double bandwidth);
    static StochasticKernel grid_matrix(std::vector<double> edges, Eigen::MatrixXd rows);

    Kind kind() const noexcept { return kind_; }
    std::string kind_name() const;
    double bandwidth() const noexcept { return h_; }
    const std::vector<double>& edges() const noexcept { return edges_; }
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }

    double density(double u, double x) const;
    // integral of density(u, .) over (x, inf)
    double tail(double u, double x) const;
    // points in x where density(u, .) may be non-smooth
    std::vector<double> breakpoints() const;

    // max over probes of |integral of density(u, .) - 1|
    double normalization_defect(std::span<const double> probes, const QuadratureSpec& spec = {}) const;

    // Psi(u) = integral of phi(x) Pi(u, x) dx
    double transformed_weight(const WeightFunction& phi, double u, const QuadratureSpec& spec = {}) const;

    // law of the kernel output when the input has law m: sf(x) = E tail(U, x)
    UnivariateModel push_forward(const UnivariateModel& m, const QuadratureSpec& spec = {}) const;

private:
    StochasticKernel() = default;
    int cell(double u) const;

    Kind kind_ = Kind::gaussian_smoothing;
    double h_ = 1.0;
    std::vector<double> edges_;
    Eigen::MatrixXd m_;
};

}  // namespace wcre

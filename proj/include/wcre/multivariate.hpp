#pragma once

#include "wcre/univariate.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <string>
#include <vector>

namespace wcre {

// Joint law on the nonnegative orthant, n in {2, 3}.
// Copula families are written through their survival copula evaluated at the
// marginal survival values v_i = sf_i(x_i); setting v_j = 1 drops coordinate j.
class MultivariateModel {
public:
    enum class Family { independent, gaussian, fgm, fgm3, fgm_chain };

    static MultivariateModel independent(std::vector<UnivariateModel> marginals);
    // X = max(Y, 0) componentwise with Y ~ N(mean, cov); sf on [0, inf)^n equals the Gaussian orthant
    static MultivariateModel gaussian(std::vector<double> mean, Eigen::MatrixXd cov);
    // sf = v1 v2 (1 + theta F1 F2)
    static MultivariateModel fgm(double theta, UnivariateModel m1, UnivariateModel m2);
    // sf = v1 v2 v3 (1 + t12 F1 F2 + t13 F1 F3 + t23 F2 F3)
    static MultivariateModel fgm3(double t12, double t13, double t23, UnivariateModel m1, UnivariateModel m2,
                                  UnivariateModel m3);
    // sf = v1 v2 v3 (1 + t12 F1 F2)(1 + t23 F2 F3); sf123 sf2 = sf12 sf23 exactly
    static MultivariateModel fgm_chain(double t12, double t23, UnivariateModel m1, UnivariateModel m2,
                                       UnivariateModel m3);

    int dim() const noexcept { return static_cast<int>(marginals_.size()); }
    Family family() const noexcept { return family_; }
    std::string family_name() const;
    const UnivariateModel& marginal(int i) const { return marginals_.at(static_cast<std::size_t>(i)); }
    const std::vector<UnivariateModel>& marginals() const noexcept { return marginals_; }
    // theta for fgm; (t12, t13, t23) for fgm3; (t12, t23) for fgm_chain
    const std::vector<double>& thetas() const noexcept { return theta_; }
    const std::vector<double>& mean() const noexcept { return mean_; }
    const Eigen::MatrixXd& cov() const noexcept { return cov_; }

    bool has_copula() const noexcept { return family_ != Family::gaussian; }
    bool absolutely_continuous() const;
    bool improper() const;

    double sf(std::span<const double> x) const;
    // joint sf of the coordinates in `mask` (bit i = coordinate i), others released to 0
    double subset_sf(unsigned mask, std::span<const double> x) const;
    // survival copula on marginal survival values
    double copula_sf(std::span<const double> v) const;
    double copula_density(std::span<const double> v) const;
    // P[X <= x] by inclusion-exclusion over subset sfs
    double cdf(std::span<const double> x) const;
    double density(std::span<const double> x) const;
    // sf(x1, x2) / sf2(x2)
    double conditional_sf(double x1, double x2) const;

    std::vector<std::vector<double>> sample_n(std::size_t n, std::uint64_t seed, std::uint64_t stream) const;

    // per-axis truncation and breakpoints used by grid integration
    double truncation_point(int axis, double tail_mass) const;
    std::vector<double> partition(int axis, double cut) const;

    // lower bound of the copula density, checked at construction
    double copula_density_min() const noexcept { return density_min_; }

private:
    MultivariateModel() = default;
    void validate_copula();
    double copula_sample_bound() const;

    Family family_ = Family::independent;
    std::vector<UnivariateModel> marginals_;
    std::vector<double> theta_;
    std::vector<double> mean_;
    Eigen::MatrixXd cov_;
    Eigen::MatrixXd chol_;
    double density_min_ = 1.0;
};

}  // namespace wcre

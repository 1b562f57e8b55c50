#pragma once

#include "wcre/quadrature.hpp"
#include "wcre/univariate.hpp"
#include "wcre/weight.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wcre {

struct EmpiricalEstimate {
    double value = 0.0;
    std::size_t n = 0;
    std::optional<std::pair<double, double>> bootstrap_ci;
    double level = 0.0;
    std::size_t pieces = 0;  // step intervals summed
};

struct BootstrapOptions {
    std::size_t replicates = 1000;
    std::uint64_t seed = 0;
};

// plug-in estimators, summed exactly over order-statistic intervals with psi differences
EmpiricalEstimate empirical_wcre(std::vector<double> sample, const WeightFunction& phi,
                                 std::optional<double> level = {}, const BootstrapOptions& boot = {});
EmpiricalEstimate empirical_wce(std::vector<double> sample, const WeightFunction& phi,
                                std::optional<double> level = {}, const BootstrapOptions& boot = {});

struct ConvergenceRow {
    std::size_t n = 0;
    double mean_abs_err = 0.0;
    double sd = 0.0;
};

// replication r at size index k draws stream k * 2^32 + r
std::vector<ConvergenceRow> convergence_experiment(const UnivariateModel& target, const WeightFunction& phi,
                                                   const std::vector<std::size_t>& sizes, std::size_t replications,
                                                   std::uint64_t seed, const QuadratureSpec& spec = {});
// nonincreasing mean error, one inversion allowed when it stays within 1 sd
bool convergence_monotone(const std::vector<ConvergenceRow>& rows);

// model quantiles at (i - 0.5) / n
std::vector<double> quantile_lattice(const UnivariateModel& m, std::size_t n);

// one value per row, optional header, '#' comments; throws InputError naming the line
std::vector<double> read_sample_csv(std::istream& in);
std::vector<double> read_sample_csv_file(const std::string& path);

}  // namespace wcre

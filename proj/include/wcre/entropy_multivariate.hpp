#pragma once

#include "wcre/entropy.hpp"
#include "wcre/multivariate.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace wcre {

// scale * prod_i factor_i(x_i); no factors means the constant `scale`
class JointWeight {
public:
    static JointWeight constant(double c);
    static JointWeight product(std::vector<WeightFunction> factors, double scale = 1.0);
    // constant(c) maps to the joint constant c, anything else to the product of n copies
    static JointWeight from_univariate(const WeightFunction& w, int n);

    double operator()(std::span<const double> x) const;
    double factor(int i, double x) const;
    double scale() const noexcept { return scale_; }
    const std::vector<WeightFunction>& factors() const noexcept { return factors_; }
    bool is_constant() const noexcept { return factors_.empty(); }
    // univariate factor i with the scale folded in when i == 0
    WeightFunction marginal_factor(int i) const;
    JointWeight scaled(double c) const;
    double min_value_on(std::span<const double> probes, int n) const;

private:
    double scale_ = 1.0;
    std::vector<WeightFunction> factors_;
};

// Tensor-grid nodes on [0, T_i] per axis with joint sfs of every coordinate subset.
class SurvivalGrid {
public:
    using Index = std::array<int, 3>;

    SurvivalGrid(const MultivariateModel& m, const QuadratureSpec& spec, int points_per_dim = 0);

    int dim() const noexcept { return n_; }
    int size(int axis) const { return static_cast<int>(axes_[static_cast<std::size_t>(axis)].nodes.size()); }
    const AxisRule& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }
    double cut(int i) const { return cuts_[static_cast<std::size_t>(i)]; }
    unsigned full_mask() const noexcept { return (1u << n_) - 1u; }

    std::size_t offset(unsigned mask, const Index& idx) const;
    std::size_t count(unsigned mask) const;
    double sf(unsigned mask, const Index& idx) const { return sf_[mask][offset(mask, idx)]; }
    double node(int axis, int i) const { return axes_[static_cast<std::size_t>(axis)].nodes[static_cast<std::size_t>(i)]; }

    // sum over the coordinates in mask of f(idx) times the node weights
    double sum(unsigned mask, const std::function<double(const Index&)>& f) const;

private:
    int n_ = 0;
    std::vector<AxisRule> axes_;
    std::vector<double> cuts_;
    std::vector<std::vector<double>> sf_;  // by mask
};

// values on the grid nodes of the coordinates in `mask`
struct GridTensor {
    unsigned mask = 0;
    std::vector<double> values;
    double at(const SurvivalGrid& g, const SurvivalGrid::Index& idx) const { return values[g.offset(mask, idx)]; }
};

struct Reduction {
    enum class Kind { psi_i, psi_ij, psi_i_rest };
    Kind kind = Kind::psi_i;
    int i = 0;
    int j = 1;
    unsigned keep_mask() const;
    std::string tag() const;
};

struct DerivedWeight {
    std::string tag;
    GridTensor weight;
};

// joint weight on all grid nodes
GridTensor weight_tensor(const SurvivalGrid& g, const JointWeight& phi);
// int phi(x) sf(x) / sf_keep(x_keep) over the coordinates outside keep
GridTensor reduce_weight(const SurvivalGrid& g, const GridTensor& phi, unsigned keep);

// -sum w sf_J log(sf_J / sf_C); C = 0 gives the plain entropy of X_J
double grid_entropy(const SurvivalGrid& g, const GridTensor& w, unsigned cond = 0);
// sum w sf_J log(sf_J / prod sf_parts)
double grid_mutual(const SurvivalGrid& g, const GridTensor& w, const std::vector<unsigned>& parts);
// sum w h(idx) over the mask of w
double grid_integral(const SurvivalGrid& g, const GridTensor& w, const std::function<double(const SurvivalGrid::Index&)>& h);

EntropyValue joint_wcre(const MultivariateModel& m, const JointWeight& phi, const QuadratureSpec& spec = {});
// over the truncation box, the orthant integral being infinite for n >= 2
EntropyValue joint_wce(const MultivariateModel& m, const JointWeight& phi, const QuadratureSpec& spec = {});
EntropyValue conditional_wcre(const MultivariateModel& m, const JointWeight& phi, const QuadratureSpec& spec = {});
EntropyValue mutual_wcre(const MultivariateModel& m, const JointWeight& phi, const QuadratureSpec& spec = {});
DerivedWeight derived_weight(const MultivariateModel& m, const JointWeight& phi, const Reduction& r,
                             const QuadratureSpec& spec = {});

struct Decomposition {
    double total = 0.0;
    std::vector<double> parts;
};
Decomposition independent_decomposition(const MultivariateModel& m, const JointWeight& phi,
                                        const QuadratureSpec& spec = {});

// grid axis breakpoints: model breakpoints and the support start inside (0, cut)
std::vector<double> grid_breakpoints(const UnivariateModel& m, double cut);

}  // namespace wcre

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wcre {

struct Knot {
    double x;
    double value;
};

// Nonnegative weight on [0, inf) with closed-form integrals psi and psi_star.
class WeightFunction {
public:
    enum class Kind { constant, power, scaled_power, exponential, tabulated };

    static WeightFunction constant(double c);
    static WeightFunction power(double a);
    static WeightFunction scaled_power(double c, double a);
    static WeightFunction exponential(double r);
    static WeightFunction tabulated(std::vector<Knot> knots);

    Kind kind() const noexcept { return kind_; }
    std::string kind_name() const;
    double coefficient() const noexcept { return c_; }
    double exponent() const noexcept { return a_; }  // a for power kinds, r for exponential
    const std::vector<Knot>& knots() const noexcept { return knots_; }

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    double psi(double x) const;
    double psi_star(double p, double x) const;
    // lim psi(x) as x -> inf, possibly +inf
    double psi_limit() const;

    // power with exponent in (-1, 0): finite integral, unbounded density at 0
    bool singular_at_zero() const noexcept;
    bool is_constant() const noexcept;

    WeightFunction scaled(double factor) const;

private:
    WeightFunction() = default;
    Kind kind_ = Kind::constant;
    double c_ = 1.0;
    double a_ = 0.0;
    std::vector<Knot> knots_;
};

double psi(const WeightFunction& phi, double x);
double psi_star(const WeightFunction& phi, double p, double x);

}  // namespace wcre

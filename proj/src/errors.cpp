#include "wcre/errors.hpp"

namespace wcre {

ConvergenceError::ConvergenceError(const std::string& what, double best_estimate, double abs_error)
    : Error(what), best_(best_estimate), err_(abs_error) {}

IntegrandError::IntegrandError(const std::string& what, double abscissa)
    : Error(what + " at x=" + std::to_string(abscissa)), x_(abscissa) {}

DivergenceError::DivergenceError(const std::string& what, double value_at_cut, double increment)
    : Error(what), value_(value_at_cut), increment_(increment) {}

}  // namespace wcre

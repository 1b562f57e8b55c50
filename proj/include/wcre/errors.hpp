#pragma once

#include <stdexcept>
#include <string>

namespace wcre {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameters, unsupported combinations, support violations.
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed user input: files, JSON, CSV rows.
class InputError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double abs_error);
    double best_estimate() const noexcept { return best_; }
    double abs_error() const noexcept { return err_; }

private:
    double best_;
    double err_;
};

// Integrand returned NaN or an infinity.
class IntegrandError : public Error {
public:
    IntegrandError(const std::string& what, double abscissa);
    double abscissa() const noexcept { return x_; }

private:
    double x_;
};

// Integral does not settle under truncation extension.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double value_at_cut, double increment);
    double value_at_cut() const noexcept { return value_; }
    double increment() const noexcept { return increment_; }

private:
    double value_;
    double increment_;
};

}  // namespace wcre

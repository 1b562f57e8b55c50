#pragma once

#include "wcre/quadrature.hpp"
#include "wcre/univariate.hpp"
#include "wcre/weight.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace wcre {

struct EntropyValue {
    double value = 0.0;
    IntegralResult quadrature;
    bool finite = true;
};

// weight supplied as a plain function of x (derived and shifted weights)
using WeightFn = std::function<double(double)>;

// -s log s with 0 log 0 = 0; `log_s` is log s when the caller has a better value
double neg_s_log_s(double s, double log_s);

// -int phi sf log sf; throws DivergenceError when the tail does not settle
EntropyValue wcre(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec = {});
EntropyValue wcre(const UnivariateModel& m, const WeightFn& phi, const QuadratureSpec& spec = {},
                  std::span<const double> extra_breaks = {});
// -int phi F log F
EntropyValue wce(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec = {});
EntropyValue wce(const UnivariateModel& m, const WeightFn& phi, const QuadratureSpec& spec = {},
                 std::span<const double> extra_breaks = {});

// (1 / sf(t)) int_t^inf phi sf
double residual_integral_mean(const UnivariateModel& m, const WeightFunction& phi, double t,
                              const QuadratureSpec& spec = {});
// (1 / F(t)) int_0^t phi F
double past_integral_mean(const UnivariateModel& m, const WeightFunction& phi, double t,
                          const QuadratureSpec& spec = {});
double wcre_via_mean(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec = {});
double wce_via_mean(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec = {});

// int phi F log(F / G) over the truncated support of F
double relative_wcre(const UnivariateModel& f, const UnivariateModel& g, const WeightFunction& phi,
                     const QuadratureSpec& spec = {});
double relative_wcre(const UnivariateModel& f, const UnivariateModel& g, const WeightFn& phi,
                     const QuadratureSpec& spec = {}, std::span<const double> extra_breaks = {});
// int phi (F - G), the sign condition for the divergence inequality
double sf_gap_integral(const UnivariateModel& f, const UnivariateModel& g, const WeightFunction& phi,
                       const QuadratureSpec& spec = {});

// int_0^1 log(x |log x|) dx, computed once
double log_entropy_constant();

struct AlphaPhi {
    double value = 0.0;
    bool degenerate = false;  // phi vanishes on a set of positive mass
};
AlphaPhi alpha_phi(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec = {});

double shannon_entropy(const UnivariateModel& m, const QuadratureSpec& spec = {});

// E psi(X) - psi(0), by integrating psi against the law
double psi_mean(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec = {});

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};
// E|psi(X) - psi(Y)|, X, Y iid; draw i uses streams 2i and 2i+1
McEstimate gini_psi_statistic(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec,
                              std::size_t n_mc = 100000, std::uint64_t seed = 0);
// E|psi(X) - E psi(X)|
McEstimate gini_centered_statistic(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec,
                                   std::size_t n_mc = 100000, std::uint64_t seed = 0);
// E[(psi(0) - psi(X)) (1 + log sf(X))]
double survival_identity_value(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec = {});
// 2 E[|D| log |D|] + 4/e with D = psi(X) - E psi(X)
McEstimate fenchel_upper_bound(const UnivariateModel& m, const WeightFunction& phi, const QuadratureSpec& spec,
                               std::size_t n_mc = 100000, std::uint64_t seed = 0);

struct LogPlusBound {
    double lhs = 0.0;
    double rhs = 0.0;
    double psi_inv_one = 0.0;  // +inf when psi stays below 1
};
LogPlusBound log_plus_moment_bound(const UnivariateModel& m, const WeightFunction& phi,
                                   const QuadratureSpec& spec = {});
// smallest x with psi(x) >= 1, by bisection
double psi_inverse(const WeightFunction& phi, double level, double hi_hint);

// law of X + Y for independent X, Y
UnivariateModel convolution_model(const UnivariateModel& x, const UnivariateModel& y, const QuadratureSpec& spec = {});
// x -> E phi(x + Y), tabulated on [0, upper]; upper defaults to the truncation point of Y
WeightFunction shifted_weight(const WeightFunction& phi, const UnivariateModel& y, const QuadratureSpec& spec = {},
                              double upper = 0.0);
double shifted_weight_value(const WeightFunction& phi, const UnivariateModel& y, double x,
                            const QuadratureSpec& spec = {});

struct FinitenessCertificate {
    bool finite = false;
    bool moment_finite = false;
    double moment = 0.0;         // E X^p
    double psi_a = 0.0;          // psi(a) - psi(0)
    bool tail_finite = false;
    double tail_integral = 0.0;  // int_a^inf phi x^(-p alpha), at the last scanned cut
    double bound = 0.0;          // e^-1/(1-alpha) [psi_a + moment^alpha tail_integral]
};
FinitenessCertificate finiteness_report(const UnivariateModel& m, const WeightFunction& phi, double p, double alpha,
                                        double a, const QuadratureSpec& spec = {});
bool finiteness_certificate(const UnivariateModel& m, const WeightFunction& phi, double p, double alpha, double a,
                            const QuadratureSpec& spec = {});

// closed forms for exponential and weibull with constant or power weights
double family_closed_form_wcre(const std::string& family, const ParamList& params, const WeightFunction& phi);

}  // namespace wcre

#pragma once

#include "wcre/quadrature.hpp"
#include "wcre/rng.hpp"

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wcre {

using ParamList = std::vector<std::pair<std::string, double>>;

class UnivariateFamily {
public:
    virtual ~UnivariateFamily() = default;

    virtual std::string name() const = 0;
    virtual ParamList params() const = 0;

    virtual double pdf(double x) const = 0;
    virtual double cdf(double x) const = 0;
    virtual double sf(double x) const = 0;
    virtual double log_sf(double x) const;
    virtual double quantile(double u) const = 0;
    // inverse survival: smallest x with sf(x) <= q
    virtual double isf(double q) const;

    virtual double support_lo() const = 0;
    virtual double support_hi() const = 0;
    virtual bool absolutely_continuous() const { return true; }
    // true when the model carries mass outside (0, inf) that the sf ignores
    virtual bool improper() const { return false; }
    virtual std::vector<double> breakpoints() const { return {}; }

    virtual double sample(CounterRng& rng) const { return quantile(rng.uniform()); }
    // E[g(X)] under the given QuadratureSpec
    virtual double expect(const Integrand& g, const QuadratureSpec& spec,
                          std::span<const double> extra_breaks) const;
};

class UnivariateModel {
public:
    static UnivariateModel uniform(double a, double b);
    static UnivariateModel exponential(double rate);
    static UnivariateModel weibull(double rate, double shape);
    static UnivariateModel gaussian(double mean, double sd);
    static UnivariateModel gamma(double shape, double scale);
    static UnivariateModel lomax(double shape, double scale);
    static UnivariateModel empirical(std::vector<double> sample);
    static UnivariateModel point_mass(double c) { return empirical({c}); }
    static UnivariateModel mixture(std::vector<double> weights, std::vector<UnivariateModel> parts);
    // Law of X2 given X1 = x under an FGM pair: F + k F (1 - F) with k = theta (1 - 2 F1(x)).
    static UnivariateModel fgm_conditional(UnivariateModel marginal, double k);
    static UnivariateModel from_family(std::shared_ptr<const UnivariateFamily> impl);

    const UnivariateFamily& family() const { return *impl_; }
    std::shared_ptr<const UnivariateFamily> shared() const { return impl_; }
    std::string name() const { return impl_->name(); }
    ParamList params() const { return impl_->params(); }

    double pdf(double x) const { return impl_->pdf(x); }
    double cdf(double x) const { return impl_->cdf(x); }
    double sf(double x) const { return impl_->sf(x); }
    double log_sf(double x) const { return impl_->log_sf(x); }
    double quantile(double u) const { return impl_->quantile(u); }
    double isf(double q) const { return impl_->isf(q); }
    double support_lo() const { return impl_->support_lo(); }
    double support_hi() const { return impl_->support_hi(); }
    bool absolutely_continuous() const { return impl_->absolutely_continuous(); }
    bool improper() const { return impl_->improper(); }
    std::vector<double> breakpoints() const { return impl_->breakpoints(); }
    double sample(CounterRng& rng) const { return impl_->sample(rng); }
    std::vector<double> sample_n(std::size_t n, std::uint64_t seed, std::uint64_t stream) const;

    double expect(const Integrand& g, const QuadratureSpec& spec = {},
                  std::span<const double> extra_breaks = {}) const {
        return impl_->expect(g, spec, extra_breaks);
    }

    // min(2 * isf(tail_mass), support_hi)
    double truncation_point(double tail_mass) const;
    // breakpoints inside (0, cut) plus a geometric ladder around the median
    std::vector<double> partition(double cut) const;

private:
    explicit UnivariateModel(std::shared_ptr<const UnivariateFamily> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const UnivariateFamily> impl_;
};

// Composite families that serialization and checks need to look inside.
class EmpiricalFamily : public UnivariateFamily {
public:
    explicit EmpiricalFamily(std::vector<double> sample);
    const std::vector<double>& sorted_sample() const { return x_; }

    std::string name() const override { return "empirical"; }
    ParamList params() const override { return {}; }
    double pdf(double) const override { return 0.0; }
    double cdf(double x) const override;
    double sf(double x) const override;
    double quantile(double u) const override;
    double isf(double q) const override;
    double support_lo() const override { return x_.front(); }
    double support_hi() const override { return x_.back(); }
    bool absolutely_continuous() const override { return false; }
    std::vector<double> breakpoints() const override;
    double sample(CounterRng& rng) const override;
    double expect(const Integrand& g, const QuadratureSpec& spec, std::span<const double> extra) const override;

private:
    std::vector<double> x_;
};

class MixtureFamily : public UnivariateFamily {
public:
    MixtureFamily(std::vector<double> weights, std::vector<UnivariateModel> parts);
    const std::vector<double>& weights() const { return w_; }
    const std::vector<UnivariateModel>& parts() const { return parts_; }

    std::string name() const override { return "mixture"; }
    ParamList params() const override { return {}; }
    double pdf(double x) const override;
    double cdf(double x) const override;
    double sf(double x) const override;
    double log_sf(double x) const override;
    double quantile(double u) const override;
    double isf(double q) const override;
    double support_lo() const override;
    double support_hi() const override;
    bool absolutely_continuous() const override;
    bool improper() const override;
    std::vector<double> breakpoints() const override;
    double sample(CounterRng& rng) const override;
    double expect(const Integrand& g, const QuadratureSpec& spec, std::span<const double> extra) const override;

private:
    std::vector<double> w_;
    std::vector<UnivariateModel> parts_;
};

class FgmConditionalFamily : public UnivariateFamily {
public:
    FgmConditionalFamily(UnivariateModel marginal, double k);
    const UnivariateModel& marginal() const { return m_; }
    double k() const { return k_; }

    std::string name() const override { return "fgm_conditional"; }
    ParamList params() const override { return {{"k", k_}}; }
    double pdf(double x) const override;
    double cdf(double x) const override;
    double sf(double x) const override;
    double log_sf(double x) const override;
    double quantile(double u) const override;
    double isf(double q) const override;
    double support_lo() const override { return m_.support_lo(); }
    double support_hi() const override { return m_.support_hi(); }
    bool absolutely_continuous() const override { return m_.absolutely_continuous(); }
    std::vector<double> breakpoints() const override { return m_.breakpoints(); }

private:
    UnivariateModel m_;
    double k_;
};

}  // namespace wcre

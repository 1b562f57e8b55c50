#include "wcre/univariate.hpp"

#include "wcre/errors.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wcre {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

double finite_param(double v, const char* name) {
    require(std::isfinite(v), std::string("parameter ") + name + " must be finite");
    return v;
}

// log of the standard normal upper tail, accurate far into the tail
double log_normal_q(double z) {
    if (z < 5.0) return std::log(0.5 * std::erfc(z / std::sqrt(2.0)));
    const double z2 = z * z;
    // asymptotic series for the Mills ratio
    double s = 1.0, term = 1.0;
    for (int k = 1; k < 8; ++k) {
        term *= -(2.0 * k - 1.0) / z2;
        s += term;
    }
    return -0.5 * z2 - std::log(z * std::sqrt(2.0 * std::acos(-1.0))) + std::log(s);
}

// Inverts a monotone cdf by bisection on [lo, hi].
double bisect_cdf(const UnivariateFamily& fam, double u, double lo, double hi) {
    if (!std::isfinite(hi)) {
        hi = std::max(1.0, lo + 1.0);
        while (fam.cdf(hi) < u) {
            hi *= 2.0;
            if (hi > 1e300) return inf;
        }
    }
    for (int i = 0; i < 300; ++i) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        (fam.cdf(m) < u ? lo : hi) = m;
    }
    return hi;
}

double bisect_sf(const UnivariateFamily& fam, double q, double lo, double hi) {
    if (!std::isfinite(hi)) {
        hi = std::max(1.0, lo + 1.0);
        while (fam.sf(hi) > q) {
            hi *= 2.0;
            if (hi > 1e300) return inf;
        }
    }
    for (int i = 0; i < 300; ++i) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        (fam.sf(m) > q ? lo : hi) = m;
    }
    return hi;
}

class UniformFamily : public UnivariateFamily {
public:
    UniformFamily(double a, double b) : a_(finite_param(a, "a")), b_(finite_param(b, "b")) {
        require(a >= 0 && b > a, "uniform(a, b) needs 0 <= a < b");
    }
    std::string name() const override { return "uniform"; }
    ParamList params() const override { return {{"a", a_}, {"b", b_}}; }
    double pdf(double x) const override { return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0; }
    double cdf(double x) const override {
        if (x <= a_) return 0.0;
        if (x >= b_) return 1.0;
        return (x - a_) / (b_ - a_);
    }
    double sf(double x) const override {
        if (x <= a_) return 1.0;
        if (x >= b_) return 0.0;
        return (b_ - x) / (b_ - a_);
    }
    double quantile(double u) const override { return a_ + u * (b_ - a_); }
    double isf(double q) const override { return b_ - q * (b_ - a_); }
    double support_lo() const override { return a_; }
    double support_hi() const override { return b_; }
    std::vector<double> breakpoints() const override { return {a_, b_}; }

private:
    double a_, b_;
};

class ExponentialFamily : public UnivariateFamily {
public:
    explicit ExponentialFamily(double rate) : l_(finite_param(rate, "lambda")) {
        require(rate > 0, "exponential rate must be positive");
    }
    std::string name() const override { return "exponential"; }
    ParamList params() const override { return {{"lambda", l_}}; }
    double pdf(double x) const override { return x < 0 ? 0.0 : l_ * std::exp(-l_ * x); }
    double cdf(double x) const override { return x <= 0 ? 0.0 : -std::expm1(-l_ * x); }
    double sf(double x) const override { return x <= 0 ? 1.0 : std::exp(-l_ * x); }
    double log_sf(double x) const override { return x <= 0 ? 0.0 : -l_ * x; }
    double quantile(double u) const override { return -std::log1p(-u) / l_; }
    double isf(double q) const override { return -std::log(q) / l_; }
    double support_lo() const override { return 0.0; }
    double support_hi() const override { return inf; }

private:
    double l_;
};

class WeibullFamily : public UnivariateFamily {
public:
    WeibullFamily(double rate, double shape) : l_(finite_param(rate, "lambda")), q_(finite_param(shape, "q")) {
        require(rate > 0 && shape > 0, "weibull needs positive lambda and q");
    }
    std::string name() const override { return "weibull"; }
    ParamList params() const override { return {{"lambda", l_}, {"q", q_}}; }
    double pdf(double x) const override {
        if (x < 0) return 0.0;
        if (x == 0) return q_ < 1 ? inf : (q_ == 1 ? l_ : 0.0);
        const double z = std::pow(l_ * x, q_);
        return q_ * z / x * std::exp(-z);
    }
    double cdf(double x) const override { return x <= 0 ? 0.0 : -std::expm1(-std::pow(l_ * x, q_)); }
    double sf(double x) const override { return x <= 0 ? 1.0 : std::exp(-std::pow(l_ * x, q_)); }
    double log_sf(double x) const override { return x <= 0 ? 0.0 : -std::pow(l_ * x, q_); }
    double quantile(double u) const override { return std::pow(-std::log1p(-u), 1.0 / q_) / l_; }
    double isf(double q) const override { return std::pow(-std::log(q), 1.0 / q_) / l_; }
    double support_lo() const override { return 0.0; }
    double support_hi() const override { return inf; }

private:
    double l_, q_;
};

// X = max(Y, 0) with Y normal; the sf on [0, inf) is the plain normal tail.
class GaussianFamily : public UnivariateFamily {
public:
    GaussianFamily(double mu, double sigma) : mu_(finite_param(mu, "mu")), s_(finite_param(sigma, "sigma")) {
        require(sigma > 0, "gaussian sigma must be positive");
    }
    std::string name() const override { return "gaussian"; }
    ParamList params() const override { return {{"mu", mu_}, {"sigma", s_}}; }
    double z(double x) const { return (x - mu_) / s_; }
    double pdf(double x) const override {
        if (x < 0) return 0.0;
        const double t = z(x);
        return std::exp(-0.5 * t * t) / (s_ * std::sqrt(2.0 * std::acos(-1.0)));
    }
    double cdf(double x) const override { return x < 0 ? 0.0 : 0.5 * std::erfc(-z(x) / std::sqrt(2.0)); }
    double sf(double x) const override { return x < 0 ? 1.0 : 0.5 * std::erfc(z(x) / std::sqrt(2.0)); }
    double log_sf(double x) const override { return x < 0 ? 0.0 : log_normal_q(z(x)); }
    double atom() const { return 0.5 * std::erfc(mu_ / (s_ * std::sqrt(2.0))); }
    double quantile(double u) const override {
        if (u <= atom()) return 0.0;
        return mu_ - s_ * std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
    }
    double isf(double q) const override {
        if (q >= 1.0 - atom()) return 0.0;
        return std::max(0.0, mu_ + s_ * std::sqrt(2.0) * boost::math::erfc_inv(2.0 * q));
    }
    double support_lo() const override { return 0.0; }
    double support_hi() const override { return inf; }
    bool absolutely_continuous() const override { return false; }
    bool improper() const override { return true; }
    std::vector<double> breakpoints() const override { return mu_ > 0 ? std::vector<double>{mu_} : std::vector<double>{}; }
    double expect(const Integrand& g, const QuadratureSpec& spec, std::span<const double> extra) const override {
        return atom() * g(0.0) + UnivariateFamily::expect(g, spec, extra);
    }

private:
    double mu_, s_;
};

class GammaFamily : public UnivariateFamily {
public:
    GammaFamily(double shape, double scale) : k_(finite_param(shape, "k")), th_(finite_param(scale, "theta")) {
        require(shape > 0 && scale > 0, "gamma needs positive shape and scale");
    }
    std::string name() const override { return "gamma"; }
    ParamList params() const override { return {{"k", k_}, {"theta", th_}}; }
    double pdf(double x) const override {
        if (x < 0) return 0.0;
        if (x == 0) return k_ < 1 ? inf : (k_ == 1 ? 1.0 / th_ : 0.0);
        return boost::math::gamma_p_derivative(k_, x / th_) / th_;
    }
    double cdf(double x) const override { return x <= 0 ? 0.0 : boost::math::gamma_p(k_, x / th_); }
    double sf(double x) const override { return x <= 0 ? 1.0 : boost::math::gamma_q(k_, x / th_); }
    double log_sf(double x) const override {
        if (x <= 0) return 0.0;
        const double q = sf(x);
        if (q > 1e-290) return std::log(q);
        const double zz = x / th_;
        return (k_ - 1) * std::log(zz) - zz - std::lgamma(k_) + std::log1p((k_ - 1) / zz);
    }
    double quantile(double u) const override { return th_ * boost::math::gamma_p_inv(k_, u); }
    double isf(double q) const override { return th_ * boost::math::gamma_q_inv(k_, q); }
    double support_lo() const override { return 0.0; }
    double support_hi() const override { return inf; }

private:
    double k_, th_;
};

// Pareto type II: sf (1 + x/s)^-alpha
class LomaxFamily : public UnivariateFamily {
public:
    LomaxFamily(double alpha, double scale) : a_(finite_param(alpha, "alpha")), s_(finite_param(scale, "scale")) {
        require(alpha > 0 && scale > 0, "lomax needs positive alpha and scale");
    }
    std::string name() const override { return "lomax"; }
    ParamList params() const override { return {{"alpha", a_}, {"scale", s_}}; }
    double pdf(double x) const override { return x < 0 ? 0.0 : a_ / s_ * std::exp(-(a_ + 1) * std::log1p(x / s_)); }
    double cdf(double x) const override { return x <= 0 ? 0.0 : -std::expm1(-a_ * std::log1p(x / s_)); }
    double sf(double x) const override { return x <= 0 ? 1.0 : std::exp(-a_ * std::log1p(x / s_)); }
    double log_sf(double x) const override { return x <= 0 ? 0.0 : -a_ * std::log1p(x / s_); }
    double quantile(double u) const override { return s_ * std::expm1(-std::log1p(-u) / a_); }
    double isf(double q) const override { return s_ * std::expm1(-std::log(q) / a_); }
    double support_lo() const override { return 0.0; }
    double support_hi() const override { return inf; }

private:
    double a_, s_;
};

}  // namespace

double UnivariateFamily::log_sf(double x) const {
    const double s = sf(x);
    return s > 0 ? std::log(s) : -inf;
}

double UnivariateFamily::isf(double q) const {
    if (q >= 1.0) return support_lo();
    if (q <= 0.0) return support_hi();
    return bisect_sf(*this, q, support_lo(), support_hi());
}

double UnivariateFamily::expect(const Integrand& g, const QuadratureSpec& spec, std::span<const double> extra) const {
    std::vector<double> bp = breakpoints();
    bp.insert(bp.end(), extra.begin(), extra.end());
    const double lo = std::max(0.0, support_lo());
    double hi = support_hi();
    if (!std::isfinite(hi)) {
        hi = 2.0 * isf(spec.tail_mass);
        const double med = isf(0.5);
        for (double x = med / 64.0; x < hi && x > 0; x *= 2.0) bp.push_back(x);
    }
    if (!(hi > lo)) return g(lo);
    auto weighted = [&](double x) {
        const double p = pdf(x);
        return p == 0.0 ? 0.0 : g(x) * p;
    };
    IntegrationOptions opts;
    if (std::isfinite(pdf(lo))) {
        opts.breakpoints = std::move(bp);
        return integrate_1d(weighted, lo, hi, spec, opts).value;
    }
    // density blows up at lo: x = lo + b u^4 on the first panel
    double b = hi;
    for (double x : bp)
        if (x > lo && x < b) b = x;
    const double head = integrate_1d([&](double u) {
        if (u <= 0.0) return 0.0;
        const double u3 = u * u * u;
        return weighted(lo + (b - lo) * u3 * u) * 4.0 * (b - lo) * u3;
    }, 0.0, 1.0, spec, opts).value;
    if (!(hi > b)) return head;
    for (double x : bp)
        if (x > b && x < hi) opts.breakpoints.push_back(x);
    return head + integrate_1d(weighted, b, hi, spec, opts).value;
}

// ---- empirical ----

EmpiricalFamily::EmpiricalFamily(std::vector<double> sample) : x_(std::move(sample)) {
    require(!x_.empty(), "empirical model needs a nonempty sample");
    for (double v : x_) require(std::isfinite(v) && v >= 0, "empirical sample entries must be finite and nonnegative");
    std::sort(x_.begin(), x_.end());
}

double EmpiricalFamily::cdf(double x) const {
    const auto k = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    return static_cast<double>(k) / static_cast<double>(x_.size());
}

double EmpiricalFamily::sf(double x) const {
    const auto k = x_.end() - std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<double>(k) / static_cast<double>(x_.size());
}

double EmpiricalFamily::quantile(double u) const {
    const double n = static_cast<double>(x_.size());
    auto k = static_cast<std::size_t>(std::ceil(u * n));
    k = std::clamp<std::size_t>(k, 1, x_.size());
    return x_[k - 1];
}

double EmpiricalFamily::isf(double q) const {
    if (q <= 0) return x_.back();
    return quantile(1.0 - q);
}

std::vector<double> EmpiricalFamily::breakpoints() const {
    std::vector<double> b = x_;
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

double EmpiricalFamily::sample(CounterRng& rng) const { return x_[rng.below(x_.size())]; }

double EmpiricalFamily::expect(const Integrand& g, const QuadratureSpec&, std::span<const double>) const {
    double s = 0.0;
    for (double v : x_) s += g(v);
    return s / static_cast<double>(x_.size());
}

// ---- mixture ----

MixtureFamily::MixtureFamily(std::vector<double> weights, std::vector<UnivariateModel> parts)
    : w_(std::move(weights)), parts_(std::move(parts)) {
    require(!parts_.empty() && w_.size() == parts_.size(), "mixture needs matching weights and components");
    double total = 0.0;
    for (double w : w_) {
        require(std::isfinite(w) && w >= 0, "mixture weights must be nonnegative");
        total += w;
    }
    require(std::abs(total - 1.0) < 1e-12, "mixture weights must sum to 1");
}

double MixtureFamily::pdf(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i] > 0) s += w_[i] * parts_[i].pdf(x);
    return s;
}
double MixtureFamily::cdf(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * parts_[i].cdf(x);
    return std::min(1.0, s);
}
double MixtureFamily::sf(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * parts_[i].sf(x);
    return std::min(1.0, s);
}
double MixtureFamily::log_sf(double x) const {
    double m = -inf;
    std::vector<double> terms;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        if (w_[i] <= 0) continue;
        const double t = std::log(w_[i]) + parts_[i].log_sf(x);
        terms.push_back(t);
        m = std::max(m, t);
    }
    if (!std::isfinite(m)) return -inf;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return std::min(0.0, m + std::log(s));
}
double MixtureFamily::quantile(double u) const { return bisect_cdf(*this, u, support_lo(), support_hi()); }
double MixtureFamily::isf(double q) const {
    if (q >= 1.0) return support_lo();
    double hi = 0.0;
    for (const auto& p : parts_) hi = std::max(hi, p.isf(q));
    return bisect_sf(*this, q, support_lo(), hi);
}
double MixtureFamily::support_lo() const {
    double lo = inf;
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i] > 0) lo = std::min(lo, parts_[i].support_lo());
    return lo;
}
double MixtureFamily::support_hi() const {
    double hi = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i] > 0) hi = std::max(hi, parts_[i].support_hi());
    return hi;
}
bool MixtureFamily::absolutely_continuous() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i] > 0 && !parts_[i].absolutely_continuous()) return false;
    return true;
}
bool MixtureFamily::improper() const {
    for (const auto& p : parts_)
        if (p.improper()) return true;
    return false;
}
std::vector<double> MixtureFamily::breakpoints() const {
    std::vector<double> b;
    for (const auto& p : parts_) {
        auto pb = p.breakpoints();
        b.insert(b.end(), pb.begin(), pb.end());
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}
double MixtureFamily::sample(CounterRng& rng) const {
    double u = rng.uniform(), acc = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        acc += w_[i];
        if (u < acc) return parts_[i].sample(rng);
    }
    return parts_.back().sample(rng);
}
double MixtureFamily::expect(const Integrand& g, const QuadratureSpec& spec, std::span<const double> extra) const {
    double s = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i] > 0) s += w_[i] * parts_[i].expect(g, spec, extra);
    return s;
}

// ---- fgm conditional ----

FgmConditionalFamily::FgmConditionalFamily(UnivariateModel marginal, double k) : m_(std::move(marginal)), k_(k) {
    require(std::isfinite(k) && std::abs(k) <= 1.0, "fgm conditional tilt must lie in [-1, 1]");
}
double FgmConditionalFamily::pdf(double x) const {
    const double F = m_.cdf(x);
    return m_.pdf(x) * (1.0 + k_ * (1.0 - 2.0 * F));
}
double FgmConditionalFamily::cdf(double x) const {
    const double F = m_.cdf(x);
    return F + k_ * F * (1.0 - F);
}
double FgmConditionalFamily::sf(double x) const {
    const double S = m_.sf(x);
    return S * (1.0 - k_ * (1.0 - S));
}
double FgmConditionalFamily::log_sf(double x) const {
    const double S = m_.sf(x);
    return m_.log_sf(x) + std::log1p(-k_ * (1.0 - S));
}
double FgmConditionalFamily::quantile(double u) const {
    // k F^2 - (1 + k) F + u = 0, stable root
    const double b = 1.0 + k_;
    const double F = 2.0 * u / (b + std::sqrt(std::max(0.0, b * b - 4.0 * k_ * u)));
    return m_.quantile(std::clamp(F, 0.0, 1.0));
}
double FgmConditionalFamily::isf(double q) const {
    // k S^2 + (1 - k) S - q = 0
    const double b = 1.0 - k_;
    const double S = 2.0 * q / (b + std::sqrt(std::max(0.0, b * b + 4.0 * k_ * q)));
    return m_.isf(std::clamp(S, 0.0, 1.0));
}

// ---- model ----

UnivariateModel UnivariateModel::uniform(double a, double b) { return UnivariateModel(std::make_shared<UniformFamily>(a, b)); }
UnivariateModel UnivariateModel::exponential(double rate) { return UnivariateModel(std::make_shared<ExponentialFamily>(rate)); }
UnivariateModel UnivariateModel::weibull(double rate, double shape) {
    return UnivariateModel(std::make_shared<WeibullFamily>(rate, shape));
}
UnivariateModel UnivariateModel::gaussian(double mean, double sd) { return UnivariateModel(std::make_shared<GaussianFamily>(mean, sd)); }
UnivariateModel UnivariateModel::gamma(double shape, double scale) {
    return UnivariateModel(std::make_shared<GammaFamily>(shape, scale));
}
UnivariateModel UnivariateModel::lomax(double shape, double scale) {
    return UnivariateModel(std::make_shared<LomaxFamily>(shape, scale));
}
UnivariateModel UnivariateModel::empirical(std::vector<double> sample) {
    return UnivariateModel(std::make_shared<EmpiricalFamily>(std::move(sample)));
}
UnivariateModel UnivariateModel::mixture(std::vector<double> weights, std::vector<UnivariateModel> parts) {
    return UnivariateModel(std::make_shared<MixtureFamily>(std::move(weights), std::move(parts)));
}
UnivariateModel UnivariateModel::fgm_conditional(UnivariateModel marginal, double k) {
    return UnivariateModel(std::make_shared<FgmConditionalFamily>(std::move(marginal), k));
}
UnivariateModel UnivariateModel::from_family(std::shared_ptr<const UnivariateFamily> impl) {
    require(impl != nullptr, "null family");
    return UnivariateModel(std::move(impl));
}

std::vector<double> UnivariateModel::sample_n(std::size_t n, std::uint64_t seed, std::uint64_t stream) const {
    CounterRng rng(seed, stream);
    std::vector<double> out(n);
    for (auto& v : out) v = sample(rng);
    return out;
}

double UnivariateModel::truncation_point(double tail_mass) const {
    const double hi = support_hi();
    if (std::isfinite(hi)) return hi;
    const double q = isf(tail_mass);
    return std::min(2.0 * q, hi);
}

std::vector<double> UnivariateModel::partition(double cut) const {
    std::vector<double> out;
    for (double b : breakpoints())
        if (b > 0 && b < cut) out.push_back(b);
    if (!std::isfinite(support_hi())) {
        const double med = isf(0.5);
        if (med > 0)
            for (double x = med / 64.0; x < cut; x *= 2.0) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace wcre

#include "wcre/weight.hpp"

#include "wcre/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace wcre {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string("weight parameter ") + what + " must be finite");
}
}  // namespace

WeightFunction WeightFunction::constant(double c) {
    require_finite(c, "c");
    if (c < 0) throw DomainError("constant weight must be nonnegative");
    WeightFunction w;
    w.kind_ = Kind::constant;
    w.c_ = c;
    return w;
}

WeightFunction WeightFunction::power(double a) {
    require_finite(a, "a");
    WeightFunction w;
    w.kind_ = Kind::power;
    w.c_ = 1.0;
    w.a_ = a;
    return w;
}

WeightFunction WeightFunction::scaled_power(double c, double a) {
    require_finite(c, "c");
    require_finite(a, "a");
    if (c < 0) throw DomainError("scaled_power coefficient must be nonnegative");
    WeightFunction w;
    w.kind_ = Kind::scaled_power;
    w.c_ = c;
    w.a_ = a;
    return w;
}

WeightFunction WeightFunction::exponential(double r) {
    require_finite(r, "r");
    if (r < 0) throw DomainError("exponential weight rate must be nonnegative");
    WeightFunction w;
    w.kind_ = Kind::exponential;
    w.a_ = r;
    return w;
}

WeightFunction WeightFunction::tabulated(std::vector<Knot> knots) {
    if (knots.empty()) throw DomainError("tabulated weight needs at least one knot");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        require_finite(knots[i].x, "knot x");
        require_finite(knots[i].value, "knot value");
        if (knots[i].value < 0) throw DomainError("tabulated weight values must be nonnegative");
        if (i > 0 && !(knots[i].x > knots[i - 1].x)) throw DomainError("tabulated knots must be strictly increasing");
    }
    WeightFunction w;
    w.kind_ = Kind::tabulated;
    w.knots_ = std::move(knots);
    return w;
}

std::string WeightFunction::kind_name() const {
    switch (kind_) {
        case Kind::constant: return "constant";
        case Kind::power: return "power";
        case Kind::scaled_power: return "scaled_power";
        case Kind::exponential: return "exponential";
        case Kind::tabulated: return "tabulated";
    }
    return "unknown";
}

bool WeightFunction::singular_at_zero() const noexcept {
    return (kind_ == Kind::power || kind_ == Kind::scaled_power) && a_ < 0 && c_ > 0;
}

bool WeightFunction::is_constant() const noexcept {
    if (kind_ == Kind::constant) return true;
    if ((kind_ == Kind::power || kind_ == Kind::scaled_power) && (a_ == 0 || c_ == 0)) return true;
    if (kind_ == Kind::exponential && a_ == 0) return true;
    if (kind_ == Kind::tabulated)
        return std::all_of(knots_.begin(), knots_.end(), [&](const Knot& k) { return k.value == knots_[0].value; });
    return false;
}

WeightFunction WeightFunction::scaled(double factor) const {
    if (!(factor >= 0) || !std::isfinite(factor)) throw DomainError("weight scale factor must be finite and nonnegative");
    switch (kind_) {
        case Kind::constant: return constant(c_ * factor);
        case Kind::power:
        case Kind::scaled_power: return scaled_power(c_ * factor, a_);
        case Kind::exponential: {
            WeightFunction w = *this;
            w.c_ = c_ * factor;
            return w;
        }
        case Kind::tabulated: {
            std::vector<Knot> k = knots_;
            for (auto& kn : k) kn.value *= factor;
            return tabulated(std::move(k));
        }
    }
    return *this;
}

double WeightFunction::operator()(double x) const {
    switch (kind_) {
        case Kind::constant: return c_;
        case Kind::power:
        case Kind::scaled_power:
            if (c_ == 0) return 0.0;
            if (a_ == 0) return c_;
            if (x == 0) return a_ > 0 ? 0.0 : inf;
            return c_ * std::pow(x, a_);
        case Kind::exponential: return c_ * std::exp(-a_ * x);
        case Kind::tabulated: {
            if (x <= knots_.front().x) return knots_.front().value;
            if (x >= knots_.back().x) return knots_.back().value;
            auto it = std::upper_bound(knots_.begin(), knots_.end(), x, [](double v, const Knot& k) { return v < k.x; });
            const Knot& r = *it;
            const Knot& l = *(it - 1);
            const double t = (x - l.x) / (r.x - l.x);
            return l.value + t * (r.value - l.value);
        }
    }
    return 0.0;
}

double WeightFunction::derivative(double x) const {
    switch (kind_) {
        case Kind::constant: return 0.0;
        case Kind::power:
        case Kind::scaled_power:
            if (c_ == 0 || a_ == 0) return 0.0;
            if (a_ == 1) return c_;
            if (x == 0) return a_ > 1 ? 0.0 : inf;
            return c_ * a_ * std::pow(x, a_ - 1);
        case Kind::exponential: return -a_ * c_ * std::exp(-a_ * x);
        case Kind::tabulated: {
            if (x < knots_.front().x || x >= knots_.back().x || knots_.size() < 2) return 0.0;
            auto it = std::upper_bound(knots_.begin(), knots_.end(), x, [](double v, const Knot& k) { return v < k.x; });
            return ((it)->value - (it - 1)->value) / ((it)->x - (it - 1)->x);
        }
    }
    return 0.0;
}

double WeightFunction::second_derivative(double x) const {
    switch (kind_) {
        case Kind::constant:
        case Kind::tabulated: return 0.0;
        case Kind::power:
        case Kind::scaled_power:
            if (c_ == 0 || a_ == 0 || a_ == 1) return 0.0;
            if (a_ == 2) return 2 * c_;
            if (x == 0) return a_ > 2 ? 0.0 : (a_ > 1 ? inf : -inf);
            return c_ * a_ * (a_ - 1) * std::pow(x, a_ - 2);
        case Kind::exponential: return a_ * a_ * c_ * std::exp(-a_ * x);
    }
    return 0.0;
}

double WeightFunction::psi(double x) const { return psi_star(0.0, x); }

double WeightFunction::psi_limit() const { return psi(inf); }

double WeightFunction::psi_star(double p, double x) const {
    if (!(x >= 0)) throw DomainError("psi requires x >= 0");
    if (!(p >= 0) || !std::isfinite(p)) throw DomainError("psi_star requires finite p >= 0");
    if (x == 0) {
        if ((kind_ == Kind::power || kind_ == Kind::scaled_power) && c_ > 0 && a_ + p <= -1)
            throw DomainError("weight x^a is not integrable at 0 for a <= -1");
        return 0.0;
    }
    switch (kind_) {
        case Kind::constant:
            if (c_ == 0) return 0.0;
            if (std::isinf(x)) return inf;
            return c_ * std::pow(x, p + 1) / (p + 1);
        case Kind::power:
        case Kind::scaled_power: {
            const double e = p + a_ + 1;
            if (c_ > 0 && e <= 0) throw DomainError("weight x^a is not integrable at 0 for a <= -1");
            if (c_ == 0) return 0.0;
            if (std::isinf(x)) return inf;
            return c_ * std::pow(x, e) / e;
        }
        case Kind::exponential: {
            const double r = a_;
            if (r == 0) return std::isinf(x) ? inf : c_ * std::pow(x, p + 1) / (p + 1);
            if (p == 0) return std::isinf(x) ? c_ / r : -c_ * std::expm1(-r * x) / r;
            const double scale = c_ / std::pow(r, p + 1);
            if (std::isinf(x)) return scale * boost::math::tgamma(p + 1);
            return scale * boost::math::tgamma_lower(p + 1, r * x);
        }
        case Kind::tabulated: {
            auto seg = [p](double u, double v, double alpha, double beta) {
                return alpha * (std::pow(v, p + 1) - std::pow(u, p + 1)) / (p + 1) +
                       beta * (std::pow(v, p + 2) - std::pow(u, p + 2)) / (p + 2);
            };
            double total = 0.0;
            const Knot& first = knots_.front();
            const double x0 = std::max(0.0, first.x);
            total += seg(0.0, std::min(x, x0), first.value, 0.0);
            if (x <= x0) return total;
            for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
                const Knot& l = knots_[i];
                const Knot& r = knots_[i + 1];
                if (r.x <= 0) continue;
                const double u = std::max(l.x, 0.0);
                const double v = std::min(r.x, x);
                if (v <= u) break;
                const double beta = (r.value - l.value) / (r.x - l.x);
                const double alpha = l.value - beta * l.x;
                total += seg(u, v, alpha, beta);
                if (x <= r.x) return total;
            }
            const Knot& last = knots_.back();
            const double u = std::max(last.x, 0.0);
            if (x > u) {
                if (std::isinf(x)) return last.value > 0 ? inf : total;
                total += seg(u, x, last.value, 0.0);
            }
            return total;
        }
    }
    return 0.0;
}

double psi(const WeightFunction& phi, double x) { return phi.psi(x); }
double psi_star(const WeightFunction& phi, double p, double x) { return phi.psi_star(p, x); }

}  // namespace wcre

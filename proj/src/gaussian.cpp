#include "wcre/gaussian.hpp"

#include "wcre/errors.hpp"
#include "wcre/quadrature.hpp"

#include <boost/math/special_functions/owens_t.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace wcre {

double normal_q(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

namespace {

double owen(double h, double a) {
    if (h == 0.0) return std::atan(a) / (2.0 * std::numbers::pi);
    if (std::isinf(a)) return (a > 0 ? 0.5 : -0.5) * normal_q(std::abs(h));
    return boost::math::owens_t(h, a);
}

bool is_diagonal(const Eigen::MatrixXd& C) {
    for (Eigen::Index i = 0; i < C.rows(); ++i)
        for (Eigen::Index j = 0; j < C.cols(); ++j)
            if (i != j && C(i, j) != 0.0) return false;
    return true;
}

}  // namespace

double bivariate_normal_upper(double h, double k, double r) {
    if (std::isinf(h) || std::isinf(k)) {
        if (h == -INFINITY) return normal_q(k);
        if (k == -INFINITY) return normal_q(h);
        return 0.0;
    }
    if (r >= 1.0) return normal_q(std::max(h, k));
    if (r <= -1.0) return std::max(0.0, normal_q(h) - normal_q(-k));
    if (h == 0.0 && k == 0.0) return 0.25 + std::asin(r) / (2.0 * std::numbers::pi);
    const double s = std::sqrt(1.0 - r * r);
    const double ah = h != 0.0 ? (k - r * h) / (h * s) : std::copysign(INFINITY, k - r * h);
    const double ak = k != 0.0 ? (h - r * k) / (k * s) : std::copysign(INFINITY, h - r * k);
    const double d = (h * k > 0.0 || (h * k == 0.0 && h + k >= 0.0)) ? 0.0 : 0.5;
    const double p = 0.5 * (normal_q(h) + normal_q(k)) - owen(h, ah) - owen(k, ak) - d;
    return std::clamp(p, 0.0, std::min(normal_q(h), normal_q(k)));
}

void require_spd(const Eigen::MatrixXd& C) {
    if (C.rows() != C.cols() || C.rows() < 1 || C.rows() > 3) throw DomainError("covariance must be square with n <= 3");
    if (!C.allFinite()) throw DomainError("covariance has non-finite entries");
    if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, C.cwiseAbs().maxCoeff()))
        throw DomainError("covariance must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() != Eigen::Success) throw DomainError("covariance must be positive definite");
}

double gaussian_orthant(std::span<const double> mean, const Eigen::MatrixXd& C, std::span<const double> x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    if (C.rows() != n || static_cast<Eigen::Index>(mean.size()) != n)
        throw DomainError("gaussian_orthant: dimension mismatch");
    std::array<double, 3> h{};
    for (Eigen::Index i = 0; i < n; ++i) h[i] = (x[i] - mean[i]) / std::sqrt(C(i, i));
    if (n == 1) return normal_q(h[0]);
    if (is_diagonal(C)) {
        double p = 1.0;
        for (Eigen::Index i = 0; i < n; ++i) p *= normal_q(h[i]);
        return p;
    }
    auto corr = [&](int i, int j) { return C(i, j) / std::sqrt(C(i, i) * C(j, j)); };
    if (n == 2) return bivariate_normal_upper(h[0], h[1], corr(0, 1));
    if (n != 3) throw DomainError("gaussian_orthant supports n <= 3");

    // condition on the third coordinate
    const double r12 = corr(0, 1), r13 = corr(0, 2), r23 = corr(1, 2);
    const double s1 = std::sqrt(1.0 - r13 * r13), s2 = std::sqrt(1.0 - r23 * r23);
    const double rc = std::clamp((r12 - r13 * r23) / (s1 * s2), -1.0, 1.0);
    auto f = [&](double z) {
        return normal_pdf(z) * bivariate_normal_upper((h[0] - r13 * z) / s1, (h[1] - r23 * z) / s2, rc);
    };
    const double lo = std::max(h[2], -40.0);
    if (lo >= 40.0) return 0.0;
    QuadratureSpec qs;
    qs.rel_tol = 1e-12;
    qs.abs_tol = 1e-17;
    IntegrationOptions opt;
    opt.allow_unconverged = true;
    for (double b : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0})
        if (b > lo) opt.breakpoints.push_back(b);
    return std::clamp(integrate_1d(f, lo, 40.0, qs, opt).value, 0.0, 1.0);
}

double gaussian_rho(std::span<const double> mean, const Eigen::MatrixXd& C, std::span<const double> x) {
    return gaussian_orthant(mean, C, x);
}

double gaussian_alpha_star(std::span<const double> mean, const Eigen::MatrixXd& C, std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    return gaussian_rho(mean, C, x) * std::pow(2.0 * std::numbers::pi, n / 2.0) * std::sqrt(C.determinant());
}

}  // namespace wcre

#pragma once

#include <Eigen/Dense>

#include <span>

namespace wcre {

// standard normal upper tail
double normal_q(double z);
double normal_pdf(double z);

// P[Z1 > h, Z2 > k] for standard bivariate normal with correlation r
double bivariate_normal_upper(double h, double k, double r);

// P[Y > x] componentwise, Y ~ N(mean, C), n <= 3
double gaussian_orthant(std::span<const double> mean, const Eigen::MatrixXd& C, std::span<const double> x);

// rho: the normalized orthant value; alpha*: the unnormalized integral rho (2 pi)^(n/2) sqrt(det C)
double gaussian_rho(std::span<const double> mean, const Eigen::MatrixXd& C, std::span<const double> x);
double gaussian_alpha_star(std::span<const double> mean, const Eigen::MatrixXd& C, std::span<const double> x);

// throws DomainError unless C is symmetric positive definite
void require_spd(const Eigen::MatrixXd& C);

}  // namespace wcre

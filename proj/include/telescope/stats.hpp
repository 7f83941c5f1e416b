#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace telescope::stats {

double mean(std::span<const double> x);
double variance(std::span<const double> x); // sample variance (n-1)
double std_dev(std::span<const double> x);

/// Adjusted Fisher-Pearson sample skewness. 0 for degenerate inputs.
double skewness(std::span<const double> x);

/// Excess kurtosis m4/m2^2 - 3 from population moments. 0 for degenerate inputs.
double excess_kurtosis(std::span<const double> x);

/// Lag-k autocorrelation. 0 for degenerate inputs.
double autocorrelation(std::span<const double> x, std::size_t lag);

/// Solves the dense system A x = b in place by Gaussian elimination with
/// partial pivoting. A is row-major n x n. Returns false when singular.
bool solve_linear_system(std::vector<double> a, std::vector<double> b,
                         std::size_t n, std::vector<double>& x);

/// Ordinary least squares for a row-major design matrix (rows x cols).
/// Returns false when the normal equations are singular.
bool ols(const std::vector<double>& design, std::span<const double> target,
         std::size_t rows, std::size_t cols, std::vector<double>& coeffs);

/// Upper-tail probability of the chi-square distribution with k degrees of
/// freedom (survival function), via the regularized incomplete gamma function.
double chi_square_sf(double x, double dof);

} // namespace telescope::stats

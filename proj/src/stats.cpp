#include "telescope/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace telescope::stats {

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / static_cast<double>(x.size() - 1);
}

double std_dev(std::span<const double> x) { return std::sqrt(variance(x)); }

double skewness(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) return 0.0;
    const double m = mean(x);
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (m2 <= 0.0) return 0.0;
    const double g1 = m3 / std::pow(m2, 1.5);
    const double nn = static_cast<double>(n);
    return g1 * std::sqrt(nn * (nn - 1.0)) / (nn - 2.0);
}

double excess_kurtosis(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) return 0.0;
    const double m = mean(x);
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    if (m2 <= 0.0) return 0.0;
    return m4 / (m2 * m2) - 3.0;
}

double autocorrelation(std::span<const double> x, std::size_t lag) {
    const std::size_t n = x.size();
    if (lag >= n) return 0.0;
    const double m = mean(x);
    double denom = 0.0;
    for (double v : x) denom += (v - m) * (v - m);
    if (denom <= 0.0) return 0.0;
    double num = 0.0;
    for (std::size_t t = lag; t < n; ++t) num += (x[t] - m) * (x[t - lag] - m);
    return num / denom;
}

bool solve_linear_system(std::vector<double> a, std::vector<double> b,
                         std::size_t n, std::vector<double>& x) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        }
        if (std::abs(a[pivot * n + col]) < 1e-12) return false;
        if (pivot != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a[row * n + col] / a[col * n + col];
            if (factor == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row * n + k] -= factor * a[col * n + k];
            b[row] -= factor * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double acc = b[row];
        for (std::size_t k = row + 1; k < n; ++k) acc -= a[row * n + k] * x[k];
        x[row] = acc / a[row * n + row];
    }
    return true;
}

bool ols(const std::vector<double>& design, std::span<const double> target,
         std::size_t rows, std::size_t cols, std::vector<double>& coeffs) {
    std::vector<double> xtx(cols * cols, 0.0), xty(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = design.data() + r * cols;
        for (std::size_t i = 0; i < cols; ++i) {
            xty[i] += row[i] * target[r];
            for (std::size_t j = i; j < cols; ++j) xtx[i * cols + j] += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = 0; j < i; ++j) xtx[i * cols + j] = xtx[j * cols + i];
    return solve_linear_system(std::move(xtx), std::move(xty), cols, coeffs);
}

namespace {

// Regularized lower incomplete gamma P(a, x), series and continued-fraction
// forms per the usual split at x = a + 1.
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (a <= 0.0) return 1.0;
    const double log_gamma_a = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - log_gamma_a);
    }
    // Lentz continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + a * std::log(x) - log_gamma_a) * h;
    return 1.0 - q;
}

} // namespace

double chi_square_sf(double x, double dof) {
    if (x <= 0.0) return 1.0;
    if (dof <= 0.0) return 0.0;
    return std::clamp(1.0 - gamma_p(dof / 2.0, x / 2.0), 0.0, 1.0);
}

} // namespace telescope::stats

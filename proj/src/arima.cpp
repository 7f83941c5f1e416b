#include "telescope/arima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <span>

#include "telescope/stats.hpp"

namespace telescope {

TimeSeries difference(const TimeSeries& series, int d) {
    require_valid(series);
    if (d < 0) throw Error("differencing order must be >= 0");
    if (static_cast<std::size_t>(d) >= series.size())
        throw TooShortError("series too short for differencing order " + std::to_string(d));

    TimeSeries current = series;
    for (int round = 0; round < d; ++round) {
        std::vector<double> next(current.size() - 1);
        for (std::size_t t = 1; t < current.size(); ++t)
            next[t - 1] = current.values[t] - current.values[t - 1];
        current.values = std::move(next);
    }
    return current;
}

namespace {

constexpr int kMaxP = 5;
constexpr int kMaxQ = 5;
constexpr double kSigmaFloor = 1e-20;

// Schur-Cohn stationarity test via step-down reflection coefficients:
// all AR roots lie outside the unit circle iff every |kappa_k| < 1.
bool ar_stationary(const std::vector<double>& phi) {
    std::vector<double> a = phi;
    for (std::size_t k = a.size(); k > 0; --k) {
        const double kappa = a[k - 1];
        if (std::abs(kappa) >= 1.0 - 1e-6) return false;
        if (k == 1) break;
        std::vector<double> next(k - 1);
        const double denom = 1.0 - kappa * kappa;
        for (std::size_t j = 0; j < k - 1; ++j)
            next[j] = (a[j] - kappa * a[k - 2 - j]) / denom;
        a = std::move(next);
    }
    return true;
}

// CSS residual recursion over the full sample, padding pre-sample values of w
// with its mean and pre-sample shocks with zero. Using the full sample keeps
// the AICc comparable across orders.
std::vector<double> css_residuals(const std::vector<double>& w, const std::vector<double>& phi,
                                  const std::vector<double>& theta, double intercept) {
    const std::size_t n = w.size();
    const double pad = stats::mean(w);
    std::vector<double> e(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double pred = intercept;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            const double lagged = t >= i + 1 ? w[t - i - 1] : pad;
            pred += phi[i] * lagged;
        }
        for (std::size_t j = 0; j < theta.size(); ++j) {
            const double shock = t >= j + 1 ? e[t - j - 1] : 0.0;
            pred += theta[j] * shock;
        }
        e[t] = w[t] - pred;
    }
    return e;
}

double sum_squares(const std::vector<double>& e) {
    double acc = 0.0;
    for (double v : e) acc += v * v;
    return acc;
}

double aicc_from_sse(double sse, std::size_t n, int n_params) {
    // n_params counts AR + MA + intercept; +1 for the innovation variance.
    const double k = static_cast<double>(n_params + 1);
    const double nn = static_cast<double>(n);
    if (nn - k - 1.0 <= 0.0) return std::numeric_limits<double>::infinity();
    const double sigma2 = std::max(sse / nn, kSigmaFloor);
    return nn * std::log(sigma2) + 2.0 * k + 2.0 * k * (k + 1.0) / (nn - k - 1.0);
}

struct CssEstimate {
    std::vector<double> phi, theta;
    double intercept = 0.0;
    double sse = 0.0;
    bool ok = false;
};

// Linear regression of w_t on an intercept, p lags of w and q lags of the
// current shock estimates. Rows start where every lag is observable.
bool regress_arma(const std::vector<double>& w, const std::vector<double>& shocks, int p, int q,
                  bool with_intercept, std::vector<double>& coeffs) {
    const std::size_t t0 = static_cast<std::size_t>(std::max(p, q));
    const std::size_t n = w.size();
    if (n <= t0) return false;
    const std::size_t rows = n - t0;
    const std::size_t cols = static_cast<std::size_t>(p + q) + (with_intercept ? 1 : 0);
    if (rows < cols + 2) return false;

    std::vector<double> design(rows * cols);
    std::vector<double> target(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = t0 + r;
        double* row = design.data() + r * cols;
        std::size_t c = 0;
        if (with_intercept) row[c++] = 1.0;
        for (int i = 1; i <= p; ++i) row[c++] = w[t - static_cast<std::size_t>(i)];
        for (int j = 1; j <= q; ++j) row[c++] = shocks[t - static_cast<std::size_t>(j)];
        target[r] = w[t];
    }
    return stats::ols(design, target, rows, cols, coeffs);
}

CssEstimate estimate_css(const std::vector<double>& w, int p, int q, bool with_intercept) {
    CssEstimate est;
    const std::size_t n = w.size();

    if (p == 0 && q == 0) {
        est.intercept = with_intercept ? stats::mean(w) : 0.0;
        est.sse = sum_squares(css_residuals(w, {}, {}, est.intercept));
        est.ok = true;
        return est;
    }

    // Shock estimates from a long autoregression (Hannan-Rissanen step 1).
    std::vector<double> shocks(n, 0.0);
    if (q > 0) {
        const int long_order = static_cast<int>(std::min<std::size_t>(
            n / 3, static_cast<std::size_t>(
                       std::max(p + q + 1, static_cast<int>(std::lround(10.0 * std::log10(static_cast<double>(n))))))));
        std::vector<double> long_ar;
        if (long_order < 1 || !regress_arma(w, shocks, long_order, 0, true, long_ar)) return est;
        for (std::size_t t = static_cast<std::size_t>(long_order); t < n; ++t) {
            double pred = long_ar[0];
            for (int i = 1; i <= long_order; ++i)
                pred += long_ar[static_cast<std::size_t>(i)] * w[t - static_cast<std::size_t>(i)];
            shocks[t] = w[t] - pred;
        }
    }

    // Step 2 plus two refinement passes recomputing the shocks from the
    // current parameters (iterated least squares).
    std::vector<double> coeffs;
    for (int pass = 0; pass < 3; ++pass) {
        if (!regress_arma(w, shocks, p, q, with_intercept, coeffs)) return est;
        std::size_t c = 0;
        est.intercept = with_intercept ? coeffs[c++] : 0.0;
        est.phi.assign(coeffs.begin() + static_cast<long>(c), coeffs.begin() + static_cast<long>(c + static_cast<std::size_t>(p)));
        c += static_cast<std::size_t>(p);
        est.theta.assign(coeffs.begin() + static_cast<long>(c), coeffs.end());

        const auto residuals = css_residuals(w, est.phi, est.theta, est.intercept);
        for (double e : residuals)
            if (!std::isfinite(e)) return est;
        est.sse = sum_squares(residuals);
        if (q == 0) break; // AR-only regression is already exact least squares
        shocks = residuals;
    }
    est.ok = true;
    return est;
}

} // namespace

ArimaFit fit_arima(const TimeSeries& series, ArimaOrder order, bool with_intercept) {
    require_valid(series);
    if (order.p < 0 || order.d < 0 || order.q < 0) throw Error("negative ARIMA order");

    const TimeSeries differenced = difference(series, order.d);
    const auto& w = differenced.values;
    if (w.size() < static_cast<std::size_t>(order.p + order.q + 3))
        throw TooShortError("series too short for requested ARIMA order");

    const CssEstimate est = estimate_css(w, order.p, order.q, with_intercept);
    if (!est.ok) throw Error("ARIMA estimation failed");
    if (!ar_stationary(est.phi)) throw Error("fitted AR polynomial is not stationary");

    ArimaFit fit;
    fit.order = order;
    fit.ar_coeffs = est.phi;
    fit.ma_coeffs = est.theta;
    fit.intercept = est.intercept;
    fit.with_intercept = with_intercept;
    fit.sigma2 = std::max(est.sse / static_cast<double>(w.size()), kSigmaFloor);
    fit.aicc = aicc_from_sse(est.sse, w.size(),
                             order.p + order.q + (with_intercept ? 1 : 0));
    return fit;
}

namespace {

// Welch-style two-half mean comparison: a drifting level shows a mean shift
// far beyond the sampling noise even when fast oscillations dominate the
// overall variance.
bool level_shifts(const std::vector<double>& x) {
    const std::size_t half = x.size() / 2;
    if (half < 4) return false;
    const std::span<const double> first(x.data(), half);
    const std::span<const double> last(x.data() + (x.size() - half), half);
    const double spread =
        std::sqrt((stats::variance(first) + stats::variance(last)) / static_cast<double>(half));
    if (spread <= 0.0) return false;
    return std::abs(stats::mean(last) - stats::mean(first)) > 8.0 * spread;
}

int select_differencing(const TimeSeries& series) {
    // Difference while it shrinks the variance by a clear margin (a plain
    // var(diff) < var(current) rule over-differences stationary AR series
    // with strong positive autocorrelation, hence the factor 3), or while the
    // level demonstrably drifts (smooth drifting trends can hide behind a
    // variance dominated by fast wobble, which differencing amplifies).
    constexpr double reduction = 1.0 / 3.0;
    TimeSeries current = series;
    int d = 0;
    while (d < 2 && current.size() > 7) {
        const TimeSeries next = difference(current, 1);
        const double var_now = stats::variance(current.values);
        const double var_next = stats::variance(next.values);
        const bool variance_rule = var_next < reduction * var_now;
        if (!variance_rule && !level_shifts(current.values)) break;
        current = next;
        ++d;
    }
    return d;
}

} // namespace

ArimaFit auto_arima(const TimeSeries& series) {
    require_valid(series);
    if (series.size() < 10) throw TooShortError("auto_arima requires at least 10 observations");

    const int d = select_differencing(series);
    const bool with_intercept = d <= 1;

    std::vector<std::pair<ArimaOrder, double>> trace;
    std::set<std::pair<int, int>> visited;
    ArimaFit best;
    best.aicc = std::numeric_limits<double>::infinity();
    bool have_best = false;

    auto try_order = [&](int p, int q) {
        if (p < 0 || p > kMaxP || q < 0 || q > kMaxQ) return;
        if (!visited.insert({p, q}).second) return;
        ArimaOrder order{p, d, q};
        try {
            ArimaFit fit = fit_arima(series, order, with_intercept);
            trace.emplace_back(order, fit.aicc);
            if (!have_best || fit.aicc < best.aicc) {
                best = std::move(fit);
                have_best = true;
            }
        } catch (const Error&) {
            trace.emplace_back(order, std::numeric_limits<double>::infinity());
        }
    };

    for (const auto& [p, q] :
         {std::pair{2, 2}, std::pair{1, 1}, std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}})
        try_order(p, q);

    while (have_best) {
        const int p = best.order.p;
        const int q = best.order.q;
        const double before = best.aicc;
        try_order(p + 1, q);
        try_order(p - 1, q);
        try_order(p, q + 1);
        try_order(p, q - 1);
        if (!(best.aicc < before)) break;
    }

    if (!have_best) {
        // Differenced mean model never fails.
        best = fit_arima(series, {0, d, 0}, with_intercept);
        trace.emplace_back(best.order, best.aicc);
    }
    best.search_trace = std::move(trace);
    return best;
}

TimeSeries forecast_arima(const ArimaFit& fit, const TimeSeries& series, int horizon) {
    require_valid(series);
    if (horizon < 1) throw Error("horizon must be >= 1");

    const TimeSeries differenced = difference(series, fit.order.d);
    std::vector<double> w = differenced.values;
    std::vector<double> shocks = css_residuals(w, fit.ar_coeffs, fit.ma_coeffs, fit.intercept);
    const double pad = stats::mean(w);

    std::vector<double> future(static_cast<std::size_t>(horizon));
    for (int k = 0; k < horizon; ++k) {
        double pred = fit.intercept;
        for (std::size_t i = 0; i < fit.ar_coeffs.size(); ++i) {
            const std::size_t back = i + 1;
            const double lagged = w.size() >= back ? w[w.size() - back] : pad;
            pred += fit.ar_coeffs[i] * lagged;
        }
        for (std::size_t j = 0; j < fit.ma_coeffs.size(); ++j) {
            const std::size_t back = j + 1;
            const double shock = shocks.size() >= back ? shocks[shocks.size() - back] : 0.0;
            pred += fit.ma_coeffs[j] * shock;
        }
        future[static_cast<std::size_t>(k)] = pred;
        w.push_back(pred);
        shocks.push_back(0.0); // future innovations are zero
    }

    // Integrate back through each differencing level, anchored at the last
    // observed value of that level.
    std::vector<std::vector<double>> levels{series.values};
    for (int level = 1; level < fit.order.d; ++level)
        levels.push_back(difference(TimeSeries(levels.back()), 1).values);

    std::vector<double> current = std::move(future);
    for (int level = fit.order.d; level-- > 0;) {
        double prev = levels[static_cast<std::size_t>(level)].back();
        for (auto& value : current) {
            value += prev;
            prev = value;
        }
    }
    return TimeSeries(std::move(current), series.start_index + static_cast<long>(series.size()));
}

} // namespace telescope

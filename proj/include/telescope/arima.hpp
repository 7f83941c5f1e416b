#pragma once

#include <utility>
#include <vector>

#include "telescope/time_series.hpp"

namespace telescope {

/// Non-seasonal ARIMA order. Search box: p <= 5, d <= 2, q <= 5.
struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;
};

struct ArimaFit {
    ArimaOrder order;
    std::vector<double> ar_coeffs;
    std::vector<double> ma_coeffs;
    double intercept = 0.0;
    bool with_intercept = true;
    double sigma2 = 0.0;
    double aicc = 0.0;
    /// Every (order, AICc) evaluated during the stepwise search, in visit order.
    std::vector<std::pair<ArimaOrder, double>> search_trace;
};

/// Applies first differencing d times; output length = input length - d.
TimeSeries difference(const TimeSeries& series, int d);

/// Fits a single ARMA(p, q) on the d-times differenced series by conditional
/// least squares (iterated Hannan-Rissanen). Throws on degenerate inputs and
/// when the fitted AR polynomial is not stationary.
ArimaFit fit_arima(const TimeSeries& series, ArimaOrder order, bool with_intercept);

/// Order selection: d by a variance-reduction rule, then a stepwise (p, q)
/// search minimising AICc. Deterministic. Falls back to (0, d, 0) when every
/// candidate fit fails.
ArimaFit auto_arima(const TimeSeries& series);

/// Iterated one-step recursion on the differenced scale with future shocks
/// zero, then cumulative un-differencing back to the original scale.
TimeSeries forecast_arima(const ArimaFit& fit, const TimeSeries& series, int horizon);

} // namespace telescope

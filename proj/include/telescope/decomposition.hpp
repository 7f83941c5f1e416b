#pragma once

#include <string>
#include <vector>

#include "telescope/time_series.hpp"

namespace telescope {

/// Additive split of a series: input == trend + season + irregular, with the
/// season exactly periodic in `period` and summing to zero over one period.
struct Decomposition {
    TimeSeries trend;
    TimeSeries season;
    TimeSeries irregular;
    int period = 1;
};

/// Sine/cosine feature columns, two per period: column 2i is sin(2*pi*t/m_i),
/// column 2i+1 is cos(2*pi*t/m_i) for row index t.
struct FourierTerms {
    std::vector<std::vector<double>> columns; // column-major
    std::vector<int> periods;
    std::size_t rows = 0;

    std::vector<std::string> column_names() const;
};

/// Periodic STL variant: seasonal component from per-phase means of the
/// detrended series (centered to sum zero over a period), trend from a
/// season-annihilating centered moving average of the deseasonalized series
/// with local linear endpoint extension, iterated to a fixed point.
/// Requires period >= 2 and length >= 2 * period.
Decomposition stl(const TimeSeries& series, int period);

FourierTerms fourier_terms(std::size_t length, const std::vector<int>& periods);

/// Continues each column for `horizon` rows with the periodic continuation
/// rule y_hat[n+k] = y[n + k - m * (floor((k-1)/m) + 1)] applied per column.
FourierTerms extend_fourier(const FourierTerms& terms, int horizon);

/// The same continuation rule applied to a seasonal component.
TimeSeries continue_season(const TimeSeries& season, int period, int horizon);

} // namespace telescope

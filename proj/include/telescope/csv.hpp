#pragma once

#include <string>
#include <vector>

#include "telescope/time_series.hpp"

namespace telescope {

/// Reads a series from CSV: one observation per line, either `value` or
/// `timestamp,value` (the timestamp column is ignored). Lines starting with
/// `#` and blank lines are skipped. Decimal separator is `.`.
TimeSeries read_series_csv(const std::string& path);

/// Writes the single-column form. Values are printed with shortest
/// round-trip formatting so read-back is bit exact.
void write_series_csv(const std::string& path, const TimeSeries& series);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

/// All `*.csv` series in a directory, sorted by filename. Returns
/// (name, series) pairs; the name is the filename without extension.
std::vector<std::pair<std::string, TimeSeries>> read_corpus_dir(const std::string& dir);

} // namespace telescope

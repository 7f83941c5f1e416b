#include "telescope/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace telescope {

namespace {

bool parse_value(std::string_view text, double& out) {
    // Trim surrounding whitespace; std::from_chars is locale independent.
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

} // namespace

TimeSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);

    TimeSeries series;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::string_view text(line);
        if (text.size() && text.back() == '\r') text.remove_suffix(1);
        if (text.empty()) continue;

        const auto comma = text.rfind(',');
        const std::string_view field = comma == std::string_view::npos
                                           ? text
                                           : text.substr(comma + 1);
        double value = 0.0;
        if (!parse_value(field, value)) {
            throw DataError(path + ":" + std::to_string(line_no) + ": not a numeric value: '" +
                            std::string(field) + "'");
        }
        series.values.push_back(value);
    }
    if (series.empty()) throw DataError(path + ": no observations found");
    return series;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    for (double v : series.values) out << format_double(v) << '\n';
}

std::vector<std::pair<std::string, TimeSeries>> read_corpus_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no .csv files in directory: " + dir);

    std::vector<std::pair<std::string, TimeSeries>> corpus;
    corpus.reserve(files.size());
    for (const auto& file : files) {
        corpus.emplace_back(file.stem().string(), read_series_csv(file.string()));
    }
    return corpus;
}

} // namespace telescope

#include "telescope/config.hpp"

#include <charconv>
#include <fstream>

namespace telescope {

namespace {

double parse_number(const std::string& path, std::size_t line_no, std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw DataError(path + ":" + std::to_string(line_no) + ": not a number: '" +
                        std::string(text) + "'");
    return value;
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() &&
           (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    return text;
}

} // namespace

PipelineConfig load_config(const std::string& path, PipelineConfig config) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key(trim(text.substr(0, eq)));
        const std::string_view value = trim(text.substr(eq + 1));
        const double number = parse_number(path, line_no, value);
        const int integer = static_cast<int>(number);

        if (key == "gb_rounds") config.regressor.gb_rounds = integer;
        else if (key == "gb_shrinkage") config.regressor.gb_shrinkage = number;
        else if (key == "gb_depth") config.regressor.gb_depth = integer;
        else if (key == "gb_min_leaf") config.regressor.gb_min_leaf = integer;
        else if (key == "rf_trees") config.regressor.rf_trees = integer;
        else if (key == "rf_depth") config.regressor.rf_depth = integer;
        else if (key == "rf_min_leaf") config.regressor.rf_min_leaf = integer;
        else if (key == "cart_depth") config.regressor.cart_depth = integer;
        else if (key == "cart_min_leaf") config.regressor.cart_min_leaf = integer;
        else if (key == "cart_cv_folds") config.regressor.cart_cv_folds = integer;
        else if (key == "peak_share") config.spectral.peak_share = number;
        else if (key == "dominance_ratio") config.spectral.dominance_ratio = number;
        else if (key == "max_count") config.spectral.max_count = integer;
        else
            throw DataError(path + ":" + std::to_string(line_no) + ": unknown key: " + key);
    }
    return config;
}

} // namespace telescope

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "telescope/benchmark.hpp"
#include "telescope/decomposition.hpp"
#include "telescope/pipeline.hpp"
#include "telescope/recommender.hpp"
#include "telescope/spectral.hpp"
#include "telescope/time_series.hpp"

namespace py = pybind11;
using namespace telescope;

namespace {

TimeSeries to_series(const std::vector<double>& values) { return TimeSeries(values); }

py::dict forecast_py(const std::vector<double>& values, int horizon, const std::string& mode,
                     std::uint64_t seed, const std::string& model_path) {
    ForecastRequest request;
    request.series = to_series(values);
    request.horizon = horizon;
    request.seed = seed;

    RecommenderModel model;
    if (mode == "recommended") {
        request.mode = ForecastMode::recommended;
        if (!model_path.empty()) {
            model = load_recommender(model_path);
            request.recommender = &model;
        }
    } else if (mode != "time-critical") {
        throw Error("mode must be 'time-critical' or 'recommended'");
    }

    const ForecastResult result = forecast(request);
    py::dict out;
    out["forecast"] = result.forecast.values;
    out["periods"] = result.diagnostics.frequencies.periods;
    out["lambda"] = result.diagnostics.transform.lambda;
    out["shift"] = result.diagnostics.transform.shift;
    out["regressor_used"] = result.diagnostics.regressor_used;
    out["trend_forecast"] = result.diagnostics.components.trend.values;
    out["season_forecast"] = result.diagnostics.components.season.values;
    return out;
}

py::dict decompose_py(const std::vector<double>& values, int period) {
    const TimeSeries series = to_series(values);
    if (period < 2) {
        const FrequencySet freqs = dominant_frequencies(series);
        if (!freqs.seasonal()) throw Error("no dominant seasonal period found; pass period");
        period = freqs.dominant();
    }
    const Decomposition parts = stl(series, period);
    py::dict out;
    out["trend"] = parts.trend.values;
    out["season"] = parts.season.values;
    out["irregular"] = parts.irregular.values;
    out["period"] = parts.period;
    return out;
}

py::tuple periodogram_py(const std::vector<double>& values) {
    const Periodogram gram = periodogram(to_series(values));
    return py::make_tuple(gram.frequency, gram.power);
}

void train_recommender_py(const std::vector<std::vector<double>>& corpus,
                          std::size_t augment_to, std::uint64_t seed,
                          const std::string& out_path, int jobs) {
    std::vector<TimeSeries> series;
    series.reserve(corpus.size());
    for (const auto& values : corpus) series.push_back(to_series(values));
    save_recommender(train_recommender(series, augment_to, seed, {}, jobs), out_path);
}

} // namespace

PYBIND11_MODULE(_telescope, m) {
    m.doc() = "Automated hybrid time-series forecasting: decomposition-based "
              "workflow with seasonal continuation, learned de-trended patterns "
              "and ARIMA trend extrapolation.";

    m.def("forecast", &forecast_py, py::arg("values"), py::arg("horizon"),
          py::arg("mode") = "time-critical", py::arg("seed") = 0,
          py::arg("model_path") = "",
          "Forecast `horizon` future values; returns a dict with the forecast "
          "and diagnostics.");

    m.def("decompose", &decompose_py, py::arg("values"), py::arg("period") = 0,
          "Split a series into trend, season and irregular parts (period 0: "
          "auto-detected).");

    m.def("dominant_periods",
          [](const std::vector<double>& values, int max_count) {
              return dominant_frequencies(to_series(values), max_count).periods;
          },
          py::arg("values"), py::arg("max_count") = 3,
          "Dominant seasonal periods, strongest first; [1] means non-seasonal.");

    m.def("periodogram", &periodogram_py, py::arg("values"),
          "Returns (frequencies, power) of the classical periodogram.");

    m.def("boxcox",
          [](const std::vector<double>& values, double lam) {
              return boxcox(to_series(values), lam).values;
          },
          py::arg("values"), py::arg("lambda_"));

    m.def("inv_boxcox",
          [](const std::vector<double>& values, double lam) {
              return inv_boxcox(to_series(values), lam).values;
          },
          py::arg("values"), py::arg("lambda_"));

    m.def("guerrero_lambda",
          [](const std::vector<double>& values, int frequency) {
              return estimate_lambda_guerrero(to_series(values), frequency);
          },
          py::arg("values"), py::arg("frequency"));

    m.def("smape",
          [](const std::vector<double>& actual, const std::vector<double>& forecast) {
              return smape(to_series(actual), to_series(forecast));
          },
          py::arg("actual"), py::arg("forecast"),
          "Symmetric MAPE in percent, range [0, 200].");

    m.def("naive_forecast",
          [](const std::vector<double>& values, int horizon) {
              return naive_forecast(to_series(values), horizon).values;
          },
          py::arg("values"), py::arg("horizon"));

    m.def("seasonal_naive_forecast",
          [](const std::vector<double>& values, int horizon) {
              return seasonal_naive_forecast(to_series(values), horizon).values;
          },
          py::arg("values"), py::arg("horizon"));

    m.def("train_recommender", &train_recommender_py, py::arg("corpus"),
          py::arg("augment_to"), py::arg("seed"), py::arg("out_path"), py::arg("jobs") = 1,
          "Train the learner recommender on a corpus of series and save it.");

    py::register_exception<Error>(m, "TelescopeError");
}

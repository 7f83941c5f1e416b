#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "telescope/csv.hpp"
#include "telescope/synth.hpp"

using namespace telescope;

namespace {

namespace fs = std::filesystem;

const fs::path kWorkDir = fs::temp_directory_path() / "telescope_cli_test";

int run(const std::string& args, const std::string& stdout_path = "/dev/null",
        const std::string& stderr_path = "/dev/null") {
    const std::string command = std::string(TELESCOPE_CLI_PATH) + " " + args + " > " +
                                stdout_path + " 2> " + stderr_path;
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t count_lines(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::size_t count = 0;
    while (std::getline(in, line)) ++count;
    return count;
}

struct Setup {
    Setup() {
        fs::create_directories(kWorkDir);
        synth::SeasonalParams params;
        params.length = 96;
        params.period = 12;
        params.slope = 0.2;
        params.noise_sd = 0.3;
        write_series_csv((kWorkDir / "input.csv").string(), synth::make_seasonal(params, 1));
    }
};
const Setup setup;

} // namespace

TEST_CASE("missing input exits 2 and names the path") {
    const auto err = kWorkDir / "err.txt";
    CHECK(run("forecast --input " + (kWorkDir / "missing.csv").string() + " --horizon 5",
              "/dev/null", err.string()) == 2);
    CHECK(slurp(err).find("missing.csv") != std::string::npos);
}

TEST_CASE("--help exits 0, bad flags exit 1") {
    CHECK(run("--help") == 0);
    CHECK(run("forecast --help") == 0);
    CHECK(run("forecast --no-such-flag") == 1);
    CHECK(run("") == 1); // a subcommand is required
    CHECK(run("forecast --input x.csv") == 1); // --horizon is required
}

TEST_CASE("forecast writes exactly the requested horizon") {
    const auto out = kWorkDir / "forecast.csv";
    CHECK(run("forecast --input " + (kWorkDir / "input.csv").string() +
              " --horizon 12 --seed 7 --output " + out.string() + " --diagnostics " +
              (kWorkDir / "diag.json").string()) == 0);
    CHECK(count_lines(out) == 12);
    const std::string diag = slurp(kWorkDir / "diag.json");
    CHECK(diag.find("\"regressor_used\"") != std::string::npos);
    CHECK(diag.find("\"lambda\"") != std::string::npos);
}

TEST_CASE("decompose emits four columns and the spectrum") {
    const auto out = kWorkDir / "parts.csv";
    const auto spectrum = kWorkDir / "spectrum.csv";
    CHECK(run("decompose --input " + (kWorkDir / "input.csv").string() + " --output " +
              out.string() + " --spectrum " + spectrum.string()) == 0);

    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "value,trend,season,irregular");
    CHECK(count_lines(out) == 97); // header + 96 rows

    std::ifstream spectrum_in(spectrum);
    std::getline(spectrum_in, header);
    CHECK(header == "frequency,power");
    CHECK(count_lines(spectrum) == 1 + 96 / 2);
}

TEST_CASE("config file overrides are applied and unknown keys rejected") {
    const auto config = kWorkDir / "telescope.conf";
    {
        std::ofstream out(config);
        out << "# tuning\n";
        out << "gb_rounds = 20\n";
        out << "dominance_ratio = 15\n";
    }
    CHECK(run("--config " + config.string() + " forecast --input " +
              (kWorkDir / "input.csv").string() + " --horizon 4") == 0);

    {
        std::ofstream out(config);
        out << "no_such_key = 1\n";
    }
    const auto err = kWorkDir / "config_err.txt";
    CHECK(run("--config " + config.string() + " forecast --input " +
              (kWorkDir / "input.csv").string() + " --horizon 4",
              "/dev/null", err.string()) == 2);
    CHECK(slurp(err).find("no_such_key") != std::string::npos);
}

TEST_CASE("synth, train-recommender and benchmark round trip") {
    const auto corpus = kWorkDir / "corpus";
    CHECK(run("--seed 5 synth --out " + corpus.string() + " --count 4 --kind seasonal "
              "--length 60") == 0);
    CHECK(count_lines(corpus / "series_000.csv") == 60);

    const auto model = kWorkDir / "rec.model";
    CHECK(run("--seed 5 train-recommender --corpus " + corpus.string() +
              " --augment-to 6 --out " + model.string()) == 0);
    CHECK(fs::exists(model));

    const auto report = kWorkDir / "report";
    CHECK(run("--seed 5 benchmark --corpus " + corpus.string() +
              " --methods naive,seasonal-naive,telescope --reps 2 --out " +
              report.string()) == 0);
    CHECK(fs::exists(report / "cells.csv"));
    CHECK(fs::exists(report / "summary.csv"));
    CHECK(fs::exists(report / "quadrants.csv"));

    // recommended mode uses the trained model
    CHECK(run("forecast --input " + (corpus / "series_001.csv").string() +
              " --horizon 6 --mode recommended --model " + model.string()) == 0);
    // and fails loudly without one
    CHECK(run("forecast --input " + (corpus / "series_001.csv").string() +
              " --horizon 6 --mode recommended") == 2);
}

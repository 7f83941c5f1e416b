#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace telescope {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or unusable input data (bad CSV, NaN values, empty series, ...).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(what) {}
};

/// A series value that must be finite or positive is not. Carries the offending index.
class ValueError : public DataError {
public:
    ValueError(const std::string& what, std::size_t index)
        : DataError(what + " at index " + std::to_string(index)), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_ = 0;
};

/// The series is too short for the requested operation.
class TooShortError : public DataError {
public:
    explicit TooShortError(const std::string& what) : DataError(what) {}
};

/// Feature columns passed to predict do not match the training schema.
class SchemaMismatchError : public Error {
public:
    explicit SchemaMismatchError(const std::string& what) : Error(what) {}
};

/// mode=recommended was requested without a trained recommender model.
class RecommenderNotTrainedError : public Error {
public:
    RecommenderNotTrainedError()
        : Error("recommended mode requires a trained recommender model") {}
};

} // namespace telescope

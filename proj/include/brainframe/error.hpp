#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace brainframe {

// Numeric values match the C API status codes and the CLI exit codes.
enum class ErrorCode : int {
    config = 2,
    divergence = 3,
    coverage = 4,
    parse = 5,
    input_shape = 6,
    numeric_domain = 7,
    io = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCode::config, what) {}
};

class InputShapeError : public Error {
public:
    explicit InputShapeError(const std::string& what) : Error(ErrorCode::input_shape, what) {}
};

class NumericDomainError : public Error {
public:
    explicit NumericDomainError(const std::string& what) : Error(ErrorCode::numeric_domain, what) {}
};

class CoverageError : public Error {
public:
    explicit CoverageError(const std::string& what) : Error(ErrorCode::coverage, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

// Raised on the first non-finite value produced during a run.
class DivergenceError : public Error {
public:
    DivergenceError(std::int64_t step, std::int64_t neuron)
        : Error(ErrorCode::divergence,
                "numeric divergence at step " + std::to_string(step) + " (neuron " +
                    std::to_string(neuron) + ")"),
          step_(step), neuron_(neuron) {}

    std::int64_t step() const noexcept { return step_; }
    std::int64_t neuron() const noexcept { return neuron_; }

private:
    std::int64_t step_;
    std::int64_t neuron_;
};

// Row and column are 1-based; column 0 means the whole row.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t row, std::size_t col, const std::string& msg)
        : Error(ErrorCode::parse, source + ":" + std::to_string(row) + ":" + std::to_string(col) +
                                      ": " + msg),
          row_(row), col_(col) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

} // namespace brainframe

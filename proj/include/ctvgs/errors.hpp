/*
 * errors.hpp — error taxonomy for the sampling library
 *
 * Argument-contract violations throw std::invalid_argument.  Everything the
 * caller can plausibly recover from gets its own type:
 *
 *   DataError            : malformed or inconsistent input data
 *   ParseError           : file syntax problems, carries a line number
 *   NumericError         : conditioning / rank failures in linear algebra
 *   DegenerateStageError : a reconstruction stage whose selector coefficient
 *                          is numerically zero (sequence must be rebuilt)
 *   AliasingError        : a sampling rate below the Nyquist rate of the
 *                          band it is supposed to capture
 */

#pragma once

#include <stdexcept>
#include <string>

namespace ctvgs {

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : DataError {
    ParseError(const std::string& msg, long line)
        : DataError(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
    long line_number;
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateStageError : NumericError {
    explicit DegenerateStageError(const std::string& msg) : NumericError(msg) {}
};

struct AliasingError : std::invalid_argument {
    explicit AliasingError(const std::string& msg) : std::invalid_argument(msg) {}
};

} // namespace ctvgs

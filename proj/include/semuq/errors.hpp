#pragma once

#include <stdexcept>
#include <string>

namespace semuq {

/// Precondition or argument violation (maps to CLI exit code 1).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File or stream failure; message names the offending path (exit code 2).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values or numeric breakdown (exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Training diverged; carries the epoch where the loss became non-finite.
class TrainingFailure : public NumericalError {
public:
    TrainingFailure(const std::string& msg, int epoch_index)
        : NumericalError(msg), epoch(epoch_index) {}
    int epoch;
};

}  // namespace semuq

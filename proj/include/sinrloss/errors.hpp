#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sinrloss {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// core_linalg
struct NotHermitianError : Error {
    using Error::Error;
};
struct NoConvergenceError : Error {
    using Error::Error;
};
struct NotPsdError : Error {
    using Error::Error;
};
struct SingularError : Error {
    using Error::Error;
};
struct DimensionMismatchError : Error {
    using Error::Error;
};

// scenario / estimators
struct DegenerateJammersError : Error {
    using Error::Error;
};
struct RankTooLargeError : Error {
    using Error::Error;
};
struct DegenerateSteeringError : Error {
    using Error::Error;
};

// rmt
struct SeparationViolatedError : Error {
    SeparationViolatedError(std::string msg, std::vector<int> spike_indices)
        : Error(std::move(msg)), indices(std::move(spike_indices)) {}
    std::vector<int> indices;
};
struct InvalidRegimeError : Error {
    using Error::Error;
};

// generic argument / config errors
struct InvalidArgumentError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    ValidationError(const std::string& field_name, const std::string& msg)
        : Error("invalid field '" + field_name + "': " + msg), field(field_name) {}
    std::string field;
};
struct ParseError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace sinrloss

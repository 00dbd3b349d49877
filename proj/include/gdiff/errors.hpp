#pragma once

#include <stdexcept>
#include <string>

namespace gdiff {

// Invalid argument or out-of-domain input (bad time, negative eigenvalue,
// dimension mismatch, malformed file contents).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Input file could not be parsed; message names the offending line.
struct IngestError : DomainError {
    explicit IngestError(const std::string& what) : DomainError(what) {}
};

// The score function is undefined at a required evaluation time
// (forward covariance singular at that time).
struct DegenerateScore : DomainError {
    explicit DegenerateScore(const std::string& what) : DomainError(what) {}
};

// An iterative numerical routine failed to converge.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gdiff

#pragma once

#include <stdexcept>
#include <string>

namespace nvbroad {

/// Invalid input: a precondition or parameter invariant does not hold.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ValidationError(what);
}

}  // namespace nvbroad

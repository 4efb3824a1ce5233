#pragma once
#include <stdexcept>
#include <string>

namespace pnact {

// Bad inputs: malformed files, parameters out of range, broken geometry.
// The CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Well-formed inputs for which no answer exists (e.g. a coverage target
// that the available mass cannot reach). CLI exit code 3.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace pnact

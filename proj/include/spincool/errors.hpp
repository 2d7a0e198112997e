#pragma once

#include <stdexcept>
#include <string>

namespace spincool {

// Bad input: parameters, config files, preconditions. CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to converge or produced an unusable result.
// CLI exit code 2.
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace spincool

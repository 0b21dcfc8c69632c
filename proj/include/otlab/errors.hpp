#pragma once

#include <stdexcept>
#include <string>

namespace otlab {

// Invalid user input or spec violation (CLI exit code 2).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A numeric cross-check failed, e.g. the two W_1 routes disagree (CLI exit code 3).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace otlab

#pragma once

#include <stdexcept>
#include <string>

namespace fbc {

// Malformed input: exit status 2 in the CLI.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A violated mathematical invariant (nonzero remainder, failed verification...): exit status 1.
class MathError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No nonzero slice was found below the height budget.
class Undetermined : public std::runtime_error {
public:
    explicit Undetermined(long long height)
        : std::runtime_error("undetermined(" + std::to_string(height) + ")"), height(height) {}
    long long height;
};

}  // namespace fbc

#pragma once

#include <stdexcept>
#include <string>

namespace c2 {

// Input that violates an operation's stated precondition (bad edge index,
// malformed graph file, degree mismatch, ...).
struct input_error : std::invalid_argument {
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A theorem-level hypothesis does not hold for the given instance, so the
// operation makes no claim (distinct from a wrong answer).
struct hypothesis_error : std::domain_error {
    explicit hypothesis_error(const std::string& what) : std::domain_error(what) {}
};

// q^n does not divide a point count that a c_n extraction requires.
struct divisibility_error : std::domain_error {
    explicit divisibility_error(const std::string& what) : std::domain_error(what) {}
};

// An enumeration would exceed the configured work cap.
struct work_cap_error : std::runtime_error {
    explicit work_cap_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace c2

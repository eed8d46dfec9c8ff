#pragma once

#include <stdexcept>
#include <string>

namespace isorabi {

// Parameters landed on (or too close to) the non-generic set where the
// series/structure-constant machinery breaks down: half-integer sigma,
// Gamma poles in the Barnes-ratio chains, vanishing block denominators.
class resonant_parameter_error : public std::domain_error {
public:
    explicit resonant_parameter_error(const std::string& what)
        : std::domain_error(what) {}
};

// log Gamma evaluated at a non-positive integer.
class pole_error : public std::domain_error {
public:
    explicit pole_error(const std::string& what) : std::domain_error(what) {}
};

// tau~ vanished within tolerance: the log-derivative has a pole there
// (Malgrange divisor).
class zero_crossing_error : public std::domain_error {
public:
    explicit zero_crossing_error(const std::string& what)
        : std::domain_error(what) {}
};

// Integration path got too close to a singular point of the system.
class path_too_close_error : public std::runtime_error {
public:
    explicit path_too_close_error(const std::string& what)
        : std::runtime_error(what) {}
};

// Scalar-ODE reduction is degenerate (Delta = 0, or the apparent
// singularity collides with 0 or t, as it does at the unflowed Rabi point).
class reduction_degenerate_error : public std::domain_error {
public:
    explicit reduction_degenerate_error(const std::string& what)
        : std::domain_error(what) {}
};

// An entry ratio that defines the Painleve V y-variable has a vanishing
// denominator in this gauge.
class degenerate_gauge_error : public std::domain_error {
public:
    explicit degenerate_gauge_error(const std::string& what)
        : std::domain_error(what) {}
};

} // namespace isorabi

#pragma once

#include <stdexcept>
#include <string>

namespace degenpred {

// Invalid parameters or a precondition violated by the caller.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The frequency grid is too coarse for the requested window.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Linear doubles cannot hold the result. Carries the log-domain estimate.
class OverflowError : public std::runtime_error {
public:
    OverflowError(const std::string& what, double log10_norm)
        : std::runtime_error(what), log10_norm_(log10_norm) {}
    double log10_norm() const noexcept { return log10_norm_; }

private:
    double log10_norm_;
};

// Braid phases disagree at the shared index k=0.
class BraidConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Observation span too short for the kernel support.
class SpanError : public std::runtime_error {
public:
    SpanError(const std::string& what, long required)
        : std::runtime_error(what), required_(required) {}
    long required_span() const noexcept { return required_; }

private:
    long required_;
};

// A braided construction produced a phase outside its class bound.
class ConstructionError : public std::runtime_error {
public:
    ConstructionError(const std::string& what, int phase)
        : std::runtime_error(what), phase_(phase) {}
    int phase() const noexcept { return phase_; }

private:
    int phase_;
};

}  // namespace degenpred

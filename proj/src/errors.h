// Shared error types. Every failure mode callers are expected to handle gets
// its own type so the C API can map them onto stable status codes.
#pragma once

#include <stdexcept>
#include <string>

namespace epiconf {

// Adaptive quadrature ran out of subdivisions; carries the best estimate so
// callers can decide whether the partial answer is usable.
class QuadratureFailure : public std::runtime_error {
public:
    QuadratureFailure(const std::string& what, double best)
        : std::runtime_error(what), best_estimate(best) {}
    double best_estimate;
};

// Root bracketing precondition violated: no sign change over [lo, hi].
class BracketingError : public std::runtime_error {
public:
    explicit BracketingError(const std::string& what) : std::runtime_error(what) {}
};

// A model was asked for a feature it does not provide (ancillary, exact
// conditional law, tractable statistic distribution, ...).
class CapabilityError : public std::runtime_error {
public:
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Bad experiment configuration (unknown model/experiment, missing seed,
// out-of-range value). Maps to process exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The likelihood has no interior maximum for this dataset.
class BoundaryMleError : public std::runtime_error {
public:
    explicit BoundaryMleError(const std::string& what) : std::runtime_error(what) {}
};

// Product of prior and likelihood fails to integrate on the working grid.
class IntegrabilityError : public std::runtime_error {
public:
    explicit IntegrabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace epiconf

#pragma once

#include <stdexcept>
#include <string>

namespace ooblab {

/// Invalid numeric input (non-finite, non-positive, or outside an operation's domain).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The request is well-formed but the model does not support it.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Lookup outside a tabulated range.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Scenario or component configuration error, tagged with the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Synchronization did not converge inside its simulated-time budget.
class SyncTimeout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A measurement procedure found nothing to estimate from.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ooblab

#pragma once

#include <stdexcept>
#include <string>

namespace pvvsg {

/// Argument outside the domain of an operation (negative irradiance, d outside (0,1), ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative solve failed to converge or could not bracket a root.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double last_residual)
        : std::runtime_error(what), residual_(last_residual) {}
    double last_residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// The MPP-voltage estimator found no admissible segment intersection.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A simulated state left its admissible band; carries the time of the abort.
class InstabilityError : public std::runtime_error {
public:
    InstabilityError(const std::string& what, double time_s)
        : std::runtime_error(what), time_(time_s) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Malformed scenario configuration. line() is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pvvsg

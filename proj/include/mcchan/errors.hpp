#ifndef MCCHAN_ERRORS_HPP
#define MCCHAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mcchan {

/// Algebraic loop or rational denominator vanishes at the requested point.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A cutoff search scanned its whole band without the gain crossing the threshold.
class NoCrossingError : public std::runtime_error {
public:
    explicit NoCrossingError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The explicit time-stepper diverged (non-finite field or unbounded growth).
class InstabilityError : public std::runtime_error {
public:
    explicit InstabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A steady-state sinusoid fit left too much residual to be trusted.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration file is unreadable, malformed, or fails validation.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mcchan

#endif

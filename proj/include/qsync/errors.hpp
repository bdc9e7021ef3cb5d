// errors.hpp: exception types shared by the qsync library.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qsync {

// Caller broke a documented precondition (shape, Hermiticity, index range).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Matrix expected to be positive semidefinite has a clearly negative eigenvalue.
class PsdViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Stacked steady-state system is rank deficient: the steady state is not unique.
class DegenerateSteadyState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// RK4 integration drifted in trace; dt too large for the spectrum of L.
class IntegrationUnstable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration rejected. Carries every violation found, each prefixed with its field path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out = "invalid configuration";
        for (const auto& s : issues) {
            out += "\n  ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> issues_;
};

} // namespace qsync

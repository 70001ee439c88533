#pragma once

#include <stdexcept>
#include <string>

namespace chainsync {

/// A run-time invariant of the model was violated. Aborts the run; the CLI maps
/// it to a non-zero exit status with the invariant's name.
class InvariantViolation : public std::runtime_error {
public:
    InvariantViolation(std::string invariant, const std::string& detail)
        : std::runtime_error("invariant '" + invariant + "' violated: " + detail),
          invariant_(std::move(invariant))
    {
    }

    [[nodiscard]] const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

/// Caller broke an operation's precondition (e.g. scheduling in the past).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace chainsync

#pragma once

#include <stdexcept>
#include <string>

namespace klaudit {

/// Violated operation precondition (divisibility, coprimality, primitivity...).
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input exceeds a configured exact-arithmetic capacity.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evaluation point too close to a pole.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A certified tail bound could not be brought below tolerance; carries the
/// bound that was achieved.
struct TailNotCertifiedError : std::runtime_error {
    double achieved_bound;
    explicit TailNotCertifiedError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_bound(achieved) {}
};

}  // namespace klaudit

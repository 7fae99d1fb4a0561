#pragma once

#include <stdexcept>
#include <string>

namespace mdnz {

// Bad argument values (out-of-range parameters, dimension mismatches).
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Evaluation requested at a point where the operation is undefined
// (e.g. a Cauchy transform on the support, a log-energy of an atomic law).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// An iterative scheme failed to reach its tolerance.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterate blew up (NaN/Inf); carries the iteration index in the message.
struct divergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature bottomed out before reaching the tolerance.
struct accuracy_error : std::runtime_error {
    double best_estimate;
    accuracy_error(const std::string& what, double best)
        : std::runtime_error(what), best_estimate(best) {}
};

// A state that the surrounding analysis guarantees cannot happen.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Requested a critical SNR for a family that has no support transition.
struct no_transition_error : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace mdnz

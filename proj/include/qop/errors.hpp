#pragma once

#include <stdexcept>
#include <string>

namespace qop {

// Base for all conditions raised by the toolkit.  Two broad families:
//
//  * check_failure -- an exact identity or tolerance that the mathematics
//    says must hold did not.  Reported to the caller; the CLI maps these
//    to exit code 1.
//  * alarm -- an internal contract was violated (division left a
//    remainder, a linear system lost rank, ...).  These indicate a bug or
//    an unusable parameter regime, never a "slightly off" result; the CLI
//    maps them to exit code 3.
//
// Bad user-supplied parameters throw std::invalid_argument (exit code 2).

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

struct check_failure : error {
    using error::error;
};

struct alarm : error {
    using error::error;
};

// A functional identity that should vanish identically has a nonzero
// residual.  Carries the offending identity's name for reporting.
struct identity_violation : check_failure {
    std::string identity;
    identity_violation(std::string name, const std::string& detail)
        : check_failure("identity '" + name + "' violated: " + detail),
          identity(std::move(name)) {}
};

// field: inverse of zero requested (programming error at the call site).
struct zero_inverse : alarm {
    zero_inverse() : alarm("inverse of zero requested") {}
};

// poly: exact_div found a nonzero remainder.
struct non_zero_remainder : alarm {
    explicit non_zero_remainder(const std::string& detail)
        : alarm("exact division left a remainder: " + detail) {}
};

// qsolver: the over-determined linear system is self-contradictory.
struct inconsistent_system : alarm {
    explicit inconsistent_system(const std::string& detail)
        : alarm("linear system inconsistent: " + detail) {}
};

// qsolver: the kept rows do not determine all unknowns.
struct under_determined : alarm {
    explicit under_determined(const std::string& detail)
        : alarm("linear system under-determined: " + detail) {}
};

// qsolver: a closed-form coefficient denominator vanished.
struct zero_denominator : alarm {
    explicit zero_denominator(const std::string& detail)
        : alarm("zero denominator in closed-form coefficient: " + detail) {}
};

// bethe: iteration failed to reach the backward-error target.
struct non_convergence : alarm {
    double worst;
    explicit non_convergence(double worst_err)
        : alarm("root iteration did not converge (worst backward error " +
                std::to_string(worst_err) + ")"),
          worst(worst_err) {}
};

// bethe: a root sits numerically on a pole of the Bethe equations.
struct pole_proximity : check_failure {
    std::size_t index;
    explicit pole_proximity(std::size_t root_index)
        : check_failure("Bethe root #" + std::to_string(root_index) +
                        " is within tolerance of a pole"),
          index(root_index) {}
};

// bethe: interpolation nodes must be pairwise distinct.
struct duplicate_nodes : alarm {
    duplicate_nodes() : alarm("interpolation nodes are not pairwise distinct") {}
};

// functional: the shifted Q factors share a root, so the partial-fraction
// split does not exist.
struct not_coprime : alarm {
    explicit not_coprime(const std::string& detail)
        : alarm("shifted Q factors are not coprime: " + detail) {}
};

// functional: a coefficient equation for F has a vanishing multiplier.
struct f_solve_singular : alarm {
    explicit f_solve_singular(const std::string& detail)
        : alarm("singular coefficient equation for F: " + detail) {}
};

}  // namespace qop

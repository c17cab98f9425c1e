#ifndef FOCKOPS_ERRORS_HPP
#define FOCKOPS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fockops {

// Base class for all library failures so callers can catch everything at once.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A hypergeometric lower parameter hits a nonpositive integer before the
// series terminates; callers should fall back to the numerical oracle.
struct singular_parameter : error {
    using error::error;
};

// A series exhausted its term budget without meeting the convergence contract.
struct non_convergence : error {
    using error::error;
};

// A requested Fock cutoff exceeds the hard ceiling (or a ladder factor
// overflowed double range).
struct cutoff_overflow : error {
    using error::error;
};

// The transformed operator has vanishing trace (e.g. subtracting from vacuum).
struct null_state : error {
    using error::error;
};

// The displaced-parity sum failed its tail test at the state's cutoff.
struct cutoff_inadequate : error {
    using error::error;
};

// Mandel Q is undefined when the mean photon number is ~0.
struct undefined_q : error {
    using error::error;
};

// A closed-form branch known to be inconsistent with the trace oracle.
struct unsupported_branch : error {
    using error::error;
};

}  // namespace fockops

#endif

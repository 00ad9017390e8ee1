#pragma once

#include <stdexcept>
#include <string>

namespace itermax {

// Input outside an operation's mathematical domain (bad discriminant,
// N outside the admissible monoid, hypothesis violated, ...).
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured resource cap was hit (sieve limit, scan cap, partition
// budget, prime search bound). The message names the cap so callers can
// raise it and retry.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A value left the declared 64-bit width. Never silent.
struct overflow_error : capacity_error {
    using capacity_error::capacity_error;
};

// An internal consistency assertion failed (e.g. a raw lattice count not
// divisible by the claimed normalizer): the inputs disagree with each other.
struct integrity_error : domain_error {
    using domain_error::domain_error;
};

} // namespace itermax

#pragma once

#include "itermax/arith.hpp"

namespace itermax {

// A quadratic field identified by its fundamental discriminant.
struct QuadraticFieldSpec {
    i64 discriminant;
};

bool is_fundamental_discriminant(i64 d);

// Validates fundamentality; throws domain_error otherwise.
QuadraticFieldSpec make_field(i64 discriminant);

enum class SplittingType { ramified, split, inert };

const char* to_string(SplittingType t);

// Trichotomy via the Kronecker symbol of the discriminant.
// Throws domain_error when p is not prime.
SplittingType splitting_type(const QuadraticFieldSpec& field, u64 p);

struct SplitPrimeCount {
    u64 count;        // exact number of split primes <= x
    double reference; // li(x)/2, the density main term
};

SplitPrimeCount split_prime_count(const QuadraticFieldSpec& field, u64 x);

inline constexpr u64 kDefaultQSearchCap = u64(1) << 31;

// j-th smallest split prime (j >= 1). Throws capacity_error with the
// exhausted bound if none is found below search_cap.
u64 nth_split_prime(const QuadraticFieldSpec& field, u64 j,
                    u64 search_cap = kDefaultQSearchCap);

// Logarithmic integral li(x) = pv-int_0^x dt/log t, x >= 2.
double log_integral(double x);

} // namespace itermax

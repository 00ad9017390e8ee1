#include "itermax/fields.hpp"

#include <cmath>
#include <string>

namespace itermax {

static bool is_squarefree(u64 n) {
    if (n == 0) return false;
    Factorization f = factorize(n);
    for (const auto& e : f.entries)
        if (e.exponent > 1) return false;
    return true;
}

bool is_fundamental_discriminant(i64 d) {
    if (d == 0 || d == 1) return false;
    i64 mod4 = ((d % 4) + 4) % 4;
    if (mod4 == 1) return is_squarefree(d < 0 ? (u64)(-d) : (u64)d);
    if (mod4 != 0) return false;
    i64 m = d / 4;
    i64 m4 = ((m % 4) + 4) % 4;
    if (m4 != 2 && m4 != 3) return false;
    return is_squarefree(m < 0 ? (u64)(-m) : (u64)m);
}

QuadraticFieldSpec make_field(i64 discriminant) {
    if (!is_fundamental_discriminant(discriminant))
        throw domain_error("make_field: " + std::to_string(discriminant) +
                           " is not a fundamental discriminant");
    return QuadraticFieldSpec{discriminant};
}

const char* to_string(SplittingType t) {
    switch (t) {
        case SplittingType::ramified: return "ramified";
        case SplittingType::split: return "split";
        case SplittingType::inert: return "inert";
    }
    return "?";
}

SplittingType splitting_type(const QuadraticFieldSpec& field, u64 p) {
    if (!is_prime(p))
        throw domain_error("splitting_type: " + std::to_string(p) + " is not prime");
    int k = kronecker(field.discriminant, p);
    if (k == 0) return SplittingType::ramified;
    return k == 1 ? SplittingType::split : SplittingType::inert;
}

SplitPrimeCount split_prime_count(const QuadraticFieldSpec& field, u64 x) {
    if (x < 2) throw domain_error("split_prime_count: x must be >= 2");
    u64 count = 0;
    i64 d = field.discriminant;
    for_primes_up_to(x, [&](u64 p) {
        if (kronecker(d, p) == 1) ++count;
        return true;
    });
    return SplitPrimeCount{count, log_integral((double)x) / 2.0};
}

u64 nth_split_prime(const QuadraticFieldSpec& field, u64 j, u64 search_cap) {
    if (j == 0) throw domain_error("nth_split_prime: j must be >= 1");
    i64 d = field.discriminant;
    u64 found = 0, answer = 0;
    for_primes_up_to(search_cap, [&](u64 p) {
        if (kronecker(d, p) == 1 && ++found == j) {
            answer = p;
            return false;
        }
        return true;
    });
    if (answer == 0)
        throw capacity_error("nth_split_prime: only " + std::to_string(found) +
                             " split primes below search cap " +
                             std::to_string(search_cap) +
                             "; raise the cap to resume");
    return answer;
}

double log_integral(double x) {
    if (x < 2.0) throw domain_error("log_integral: x must be >= 2");
    // li(x) = Ei(log x); Ei via the everywhere-positive series
    // Ei(z) = gamma + log z + sum_{k>=1} z^k / (k * k!).
    const long double euler_gamma = 0.5772156649015328606065120900824024L;
    long double z = std::log((long double)x);
    long double sum = 0.0L, term = 1.0L;
    for (int k = 1; k < 500; ++k) {
        term *= z / k;
        long double add = term / k;
        sum += add;
        if (add < sum * 1e-19L) break;
    }
    return (double)(euler_gamma + std::log(z) + sum);
}

} // namespace itermax

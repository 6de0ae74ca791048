#pragma once

#include <vector>

#include "midy/arith.hpp"
#include "midy/natural.hpp"

namespace midy {

// M_b(N): the divisors d > 1 of |b|_N for which N has the Midy property.
struct MidySet {
    Natural modulus;               // N
    Natural base;                  // canonical representative of b in U_N
    Natural order;                 // |b|_N
    std::vector<Natural> members;  // ascending
};

// One x in U_N with the period of x/N in base b split into d blocks.
struct BlockDecomposition {
    Natural x;
    std::vector<Natural> digits;        // |b|_N base-b digits, leading zeros kept
    Natural block_length;               // k = |b|_N / d
    std::vector<Natural> block_values;  // A_1 .. A_d
    Natural block_sum;                  // S_d(x)
};

/// Order-valuation test: with k = |b|_N / d, true iff nu_p(N) <= nu_p(d) for
/// every prime p dividing gcd(b^k - 1, N). Requires d > 1 and d | |b|_N.
bool has_midy_property(const Natural& N, const Natural& b, const Natural& d);

/// Definitional oracle: expands the period of every x/N in base b, splits it
/// into d blocks, and checks each block sum is a multiple of b^k - 1.
/// Enumerates all of U_N, so N and |b|_N must be within the oracle bound.
bool has_midy_property_oracle(const Natural& N, const Natural& b, const Natural& d);

/// Period digits of x/N (the base-b expansion of x(b^|b|_N - 1)/N, padded to
/// length |b|_N) split into d blocks with their values and sum.
BlockDecomposition block_decomposition(const Natural& N, const Natural& b, const Natural& d,
                                       const Natural& x);

MidySet midy_set(const Natural& N, const Natural& b);

/// midy_set evaluated by the digit-expansion definition instead of the
/// order-valuation theorem: one pass over U_N checks every divisor at once.
MidySet midy_set_oracle(const Natural& N, const Natural& b);

/// Structural prime-power membership test for q^v in M_b(N): N = q^n * prod
/// p_i^{h_i} with 0 <= n <= v, nu_q(|b|_{p_i}) > 0 for all i, and
/// nu_q(|b|_N) - v < min_i nu_q(|b|_{p_i}). Requires q^v | |b|_N.
bool prime_power_midy_check(const Natural& N, const Natural& b, const Natural& q,
                            const Natural& v);

/// Midy number (overpseudoprime) to base b: odd composite N coprime to
/// |b|_N with |b|_N = |b|_p for every prime p | N.
bool is_midy_number(const Natural& N, const Natural& b);

/// Same predicate through the cyclotomic characterization:
/// Phi_{|b|_N}(b) == 0 (mod N). Requires N composite, gcd(N, |b|_N) = 1.
bool is_midy_number_cyclotomic(const Natural& N, const Natural& b);

/// Number of bases b in U_N to which N is a Midy number, by the closed
/// formula sum over d | D of phi(d)^omega(N), D = gcd of (p - 1) over the
/// prime divisors. N must be odd composite.
Natural count_midy_bases(const Natural& N);

struct MidyBruteCounts {
    // Bases whose order is the same modulo N and modulo every prime divisor.
    Natural by_order_equality;
    // Bases passing the full Midy-number definition (adds the parity,
    // compositeness and gcd(N, |b|_N) = 1 conditions).
    Natural by_full_definition;
};

/// Exhaustive scan of U_N; both tallies reported so that any discrepancy
/// against the closed formula is visible. N odd composite, within the
/// oracle bound.
MidyBruteCounts count_midy_bases_brute(const Natural& N);

}  // namespace midy

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "midy/arith.hpp"
#include "midy/natural.hpp"

namespace midy {

// N - 1 = q^s * t with gcd(q, t) = 1, s >= 1.
struct QDecomposition {
    Natural q;
    Natural s;
    Natural t;
};

/// b^(N-1) == 1 (mod N). Compositeness of N is the caller's precondition;
/// on prime N the congruence simply holds.
bool is_fermat_psp(const Natural& N, const Natural& b);

/// Miller condition on odd N: with N - 1 = 2^s t (t odd), b^t == 1 or
/// b^(2^i t) == -1 (mod N) for some 0 <= i < s.
bool is_strong_psp(const Natural& N, const Natural& b);

/// Equivalent order-valuation characterization: Fermat condition plus
/// nu_2(|b|_p) identical across the prime divisors p of N.
bool strong_psp_via_valuation(const Natural& N, const Natural& b);

/// Korselt criterion: composite, squarefree, p - 1 | N - 1 for all p | N.
bool is_carmichael(const Natural& N);

/// Primes q dividing gcd of (p - 1) over all prime divisors p of N.
std::vector<Natural> eligible_q(const Natural& N);

QDecomposition q_decompose(const Natural& N, const Natural& q);

struct QProbableResult {
    bool result = false;
    std::optional<Natural> witness_i;  // set when condition (2) fired
};

/// Miller-style q-probable-primality: b^t == 1 (mod N), or N divides
/// Phi_q(b^(q^i t)) for some 0 <= i < s. With check_hypothesis, verifies
/// q | p - 1 for every prime p | N first and throws HypothesisViolated
/// otherwise (the enforced semantics).
QProbableResult is_q_probable_prime(const Natural& N, const Natural& b, const Natural& q,
                                    bool check_hypothesis);

/// Definitional route: nu_q(|b|_p) identical across the prime divisors of N
/// (and the Fermat condition holds). Hypothesis always enforced.
bool is_q_pseudoprime_def(const Natural& N, const Natural& b, const Natural& q);

/// When condition (2) fired with witness i, returns q^(i+1) after checking
/// that every prime divisor of N is congruent to 1 modulo it (aborting with
/// PostconditionViolated otherwise). Empty when condition (1) applied.
std::optional<Natural> q_divisor_congruence(const Natural& N, const Natural& b, const Natural& q);

/// For Carmichael N with N - 1 = q^s t, q not dividing any p - 1: checks
/// b^t == 1 (mod N) over the sample, or over all of U_N when the sample is
/// empty and N is within the oracle bound.
bool carmichael_collapse_check(const Natural& N, const Natural& q, std::span<const Natural> sample);

/// nu(q, N) = nu_q(gcd(p_1 - 1, ..., p_omega - 1)).
Natural nu_q_of(const Natural& q, const Natural& N);

/// B_pp(N) = prod over p | N of gcd(p - 1, N - 1).
Natural count_pp_bases(const Natural& N);

/// B_spp(N) = (1 + (2^(nu(2,N) w) - 1)/(2^w - 1)) * prod gcd(p - 1, t),
/// with N - 1 = 2^s t, t odd, w = omega(N).
Natural count_spp_bases(const Natural& N);

/// B_qpp(N) = (1 + (q-1)^w (q^(nu(q,N) w) - 1)/(q^w - 1)) * prod gcd(p-1, t),
/// requiring every prime divisor of N congruent to 1 mod q.
Natural count_qpp_bases(const Natural& N, const Natural& q);

struct BasePredicate {
    enum class Kind { fermat, strong, q_probable, midy_order_equality };

    Kind kind = Kind::fermat;
    Natural q;  // only for q_probable

    static BasePredicate fermat() { return {Kind::fermat, 0}; }
    static BasePredicate strong() { return {Kind::strong, 0}; }
    static BasePredicate q_probable(Natural q_) { return {Kind::q_probable, std::move(q_)}; }
    static BasePredicate midy_order_equality() { return {Kind::midy_order_equality, 0}; }
};

/// |{ b in U_N : predicate holds }| by exhaustive scan (N within the oracle
/// bound). b = 1 and b = N-1 are counted by their plain truth values.
Natural count_bases_brute(const Natural& N, const BasePredicate& predicate);

}  // namespace midy

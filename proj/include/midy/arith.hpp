#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "midy/natural.hpp"

namespace midy {

struct FactorPower {
    Natural prime;
    unsigned exponent = 0;

    friend bool operator==(const FactorPower&, const FactorPower&) = default;
};

// Prime factorization, primes strictly ascending, exponents >= 1.
class Factorization {
public:
    Factorization() = default;
    explicit Factorization(std::vector<FactorPower> factors);

    const std::vector<FactorPower>& factors() const { return factors_; }
    auto begin() const { return factors_.begin(); }
    auto end() const { return factors_.end(); }

    std::size_t omega() const { return factors_.size(); }
    bool squarefree() const;
    Natural value() const;
    Natural radical() const;
    unsigned exponent_of(const Natural& p) const;  // 0 when p is absent
    std::vector<Natural> divisors() const;         // ascending, includes 1 and n

    friend bool operator==(const Factorization&, const Factorization&) = default;

private:
    std::vector<FactorPower> factors_;
};

// Deterministic for n < 318665857834031151167461 (first twelve prime
// witnesses, Sorenson-Webster bound, comfortably above 2^64). Beyond that,
// 40 additional strong-probable-prime rounds with a fixed witness schedule;
// error probability below 4^-40.
bool is_prime(const Natural& n);

/// Trial division to 10^6, then Brent's rho under the configured iteration
/// budget. Throws FactorizationBudgetExceeded when the budget runs out.
Factorization factorize(const Natural& n);

/// base^exp mod m. m >= 1; m == 1 yields 0.
Natural mod_pow(const Natural& base, const Natural& exp, const Natural& m);

/// Least e >= 1 with b^e == 1 (mod n). Order in the trivial group (n = 1)
/// is 1. Requires gcd(b, n) = 1.
Natural multiplicative_order(const Natural& b, const Natural& n);

/// Largest v with p^v | n. p >= 2 prime, n >= 1.
Natural p_adic_valuation(const Natural& p, const Natural& n);

Natural euler_phi(const Natural& n);

/// Moebius function: 0 on non-squarefree, else (-1)^omega.
int moebius(const Natural& n);

struct Residue {
    Natural remainder;
    Natural modulus;
};

/// Unique x modulo the product of the (pairwise coprime) moduli with
/// x == r_i (mod m_i). Empty input yields 0.
Natural crt_combine(std::span<const Residue> residues);

}  // namespace midy

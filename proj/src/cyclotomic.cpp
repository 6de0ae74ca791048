#include "midy/cyclotomic.hpp"

#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>

#include "midy/errors.hpp"

namespace midy {

namespace {

// Squarefree divisors of n paired with the subset parity (mu of the divisor).
std::vector<std::pair<Natural, bool>> squarefree_divisors(const Factorization& f) {
    std::vector<std::pair<Natural, bool>> divs{{Natural(1), false}};  // false = even subset
    for (const auto& fp : f.factors()) {
        std::size_t existing = divs.size();
        for (std::size_t i = 0; i < existing; ++i)
            divs.emplace_back(divs[i].first * fp.prime, !divs[i].second);
    }
    return divs;
}

// Coefficients of Phi_r(x) for squarefree r, low degree first. Built from
// Phi_r(x) = prod over squarefree d | r of (1 - x^(r/d))^mu(d); the sign
// factors cancel for r > 1. Multiplications first, then the exact divisions
// (stride-d prefix sums), so everything stays in small integers.
std::vector<std::int64_t> build_coefficients(std::uint64_t r) {
    if (r == 1)
        return {-1, 1};  // x - 1
    const Factorization fact = factorize(Natural(r));
    std::vector<std::uint64_t> mul_strides, div_strides;
    for (const auto& [d, odd] : squarefree_divisors(fact)) {
        std::uint64_t stride = r / as_u64(d);
        (odd ? div_strides : mul_strides).push_back(stride);
    }
    std::size_t cap = 1;
    for (std::uint64_t m : mul_strides)
        cap += m;
    std::vector<std::int64_t> c(cap, 0);
    c[0] = 1;
    std::size_t deg = 0;
    for (std::uint64_t m : mul_strides) {  // multiply by (1 - x^m)
        deg += m;
        for (std::size_t i = deg; i >= m; --i)
            c[i] -= c[i - m];
    }
    for (std::uint64_t m : div_strides) {  // divide by (1 - x^m), exact
        for (std::size_t i = m; i <= deg; ++i)
            c[i] += c[i - m];
        for (std::size_t i = deg - m + 1; i <= deg; ++i)
            if (c[i] != 0)
                throw Error("cyclotomic: inexact polynomial division");
        deg -= m;
    }
    c.resize(deg + 1);
    return c;
}

const std::vector<std::int64_t>& coefficients_for(std::uint64_t radical) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<std::vector<std::int64_t>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(radical);
    if (it == cache.end())
        it = cache.emplace(radical, std::make_unique<std::vector<std::int64_t>>(
                                        build_coefficients(radical))).first;
    return *it->second;
}

}  // namespace

Natural cyclotomic_eval(const Natural& n, const Natural& b) {
    if (n < 1)
        throw DomainError("cyclotomic_eval: n must be >= 1");
    if (b < 2)
        throw DomainError("cyclotomic_eval: b must be >= 2");
    if (!fits_u64(n) || as_u64(n) > (1u << 30))
        throw DomainError("cyclotomic_eval: n too large for exact evaluation");
    if (n == 1)
        return b - 1;
    const std::uint64_t nn = as_u64(n);
    const Factorization fact = factorize(n);
    // Group numerator (even subsets, mu = +1) and denominator terms so no
    // intermediate value goes negative; one exact division at the end.
    Natural num = 1, den = 1;
    for (const auto& [d, odd] : squarefree_divisors(fact)) {
        const unsigned k = static_cast<unsigned>(nn / as_u64(d));
        Natural term = boost::multiprecision::pow(b, k) - 1;
        (odd ? den : num) *= term;
    }
    Natural q = num / den;
    if (q * den != num)
        throw Error("cyclotomic_eval: inexact division");
    return q;
}

Natural cyclotomic_eval_mod(const Natural& n, const Natural& b, const Natural& m) {
    if (n < 1)
        throw DomainError("cyclotomic_eval_mod: n must be >= 1");
    if (m < 1)
        throw DomainError("cyclotomic_eval_mod: modulus must be >= 1");
    if (m == 1)
        return 0;
    if (!fits_u64(n) || as_u64(n) > 100'000'000)
        throw DomainError("cyclotomic_eval_mod: n too large");
    const std::uint64_t nn = as_u64(n);
    if (nn == 1)
        return ((b - 1) % m + m) % m;
    std::uint64_t radical = 1;
    for (const auto& f : factorize(n))
        radical *= as_u64(f.prime);
    if (radical > 1'000'000)
        throw DomainError("cyclotomic_eval_mod: squarefree kernel too large");
    const auto& coeff = coefficients_for(radical);
    const Natural y = mod_pow(b, Natural(nn / radical), m);
    if (fits_u64(m)) {
        const std::uint64_t mu = as_u64(m);
        const std::uint64_t yu = as_u64(y);
        std::uint64_t acc = 0;
        for (std::size_t i = coeff.size(); i-- > 0;) {
            acc = mulmod_u64(acc, yu, mu);
            std::int64_t c = coeff[i];
            std::uint64_t cu = c >= 0 ? static_cast<std::uint64_t>(c) % mu
                                      : (mu - static_cast<std::uint64_t>(-c) % mu) % mu;
            acc = addmod_u64(acc, cu, mu);
        }
        return acc;
    }
    Natural acc = 0;
    for (std::size_t i = coeff.size(); i-- > 0;) {
        acc = (acc * y + coeff[i]) % m;
    }
    return (acc + m) % m;
}

Natural gcd_n_phi(const Natural& n, const Natural& b) {
    if (n < 3)
        throw DomainError("gcd_n_phi: n must be >= 3");
    if (b < 2)
        throw DomainError("gcd_n_phi: b must be >= 2");
    const Natural phi = cyclotomic_eval(n, b);
    const Natural g = gcd(n, phi);
    if (g != 1) {
        const Factorization fact = factorize(n);
        const Natural& largest = fact.factors().back().prime;
        if (g != largest)
            throw PostconditionViolated("gcd_n_phi: gcd(n, Phi_n(b)) = " + to_decimal(g) +
                                        " is neither 1 nor the greatest prime divisor of " +
                                        to_decimal(n));
    }
    return g;
}

GeneratorOutcome midy_generator(const Natural& n, const Natural& b) {
    if (n <= 2)
        throw DomainError("midy_generator: n must exceed 2");
    if (b < 2)
        throw DomainError("midy_generator: b must be >= 2");
    const Natural phi = cyclotomic_eval(n, b);
    const Natural g = gcd(n, phi);
    GeneratorOutcome out;
    out.value = phi / g;
    if (out.value <= 1)
        out.verdict = GeneratorOutcome::Verdict::Unit;
    else if (is_prime(out.value))
        out.verdict = GeneratorOutcome::Verdict::Prime;
    else
        out.verdict = GeneratorOutcome::Verdict::MidyNumber;
    return out;
}

}  // namespace midy

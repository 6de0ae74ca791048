#include "midy/arith.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <random>

#include "midy/config.hpp"
#include "midy/errors.hpp"

namespace midy {

namespace config {

namespace {
std::atomic<std::uint64_t> g_oracle_bound{kDefaultOracleBound};
std::atomic<std::uint64_t> g_factor_budget{kDefaultFactorBudget};
}  // namespace

std::uint64_t oracle_bound() { return g_oracle_bound.load(std::memory_order_relaxed); }
void set_oracle_bound(std::uint64_t bound) { g_oracle_bound.store(bound, std::memory_order_relaxed); }
std::uint64_t factor_budget() { return g_factor_budget.load(std::memory_order_relaxed); }
void set_factor_budget(std::uint64_t budget) { g_factor_budget.store(budget, std::memory_order_relaxed); }

}  // namespace config

Natural parse_natural(std::string_view text) {
    if (text.empty())
        throw DomainError("parse_natural: empty string");
    for (char c : text)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw DomainError("parse_natural: not a decimal natural: '" + std::string(text) + "'");
    // cpp_int would read a leading 0 as an octal prefix.
    const std::size_t first = text.find_first_not_of('0');
    if (first == std::string_view::npos)
        return 0;
    return Natural(std::string(text.substr(first)));
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m == 1)
        return 0;
    std::uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1)
            result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

namespace {

constexpr std::uint32_t kSieveLimit = 1'000'000;

struct Sieve {
    std::vector<std::uint32_t> spf;      // smallest prime factor, index up to kSieveLimit
    std::vector<std::uint32_t> primes;   // all primes <= kSieveLimit
};

const Sieve& sieve() {
    static const Sieve s = [] {
        Sieve out;
        out.spf.assign(kSieveLimit + 1, 0);
        for (std::uint32_t i = 2; i <= kSieveLimit; ++i) {
            if (out.spf[i] == 0) {
                out.primes.push_back(i);
                for (std::uint64_t j = i; j <= kSieveLimit; j += i)
                    if (out.spf[j] == 0)
                        out.spf[j] = i;
            }
        }
        return out;
    }();
    return s;
}

// First twelve primes: a deterministic Miller-Rabin witness set for
// n < 318665857834031151167461 (Sorenson-Webster).
constexpr std::uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

const Natural& deterministic_limit() {
    static const Natural limit("318665857834031151167461");
    return limit;
}

bool miller_rabin_u64(std::uint64_t n, std::uint64_t a) {
    a %= n;
    if (a == 0)
        return true;
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1)
            return true;
    }
    return false;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2)
        return false;
    for (std::uint64_t p : kWitnesses) {
        if (n % p == 0)
            return n == p;
    }
    if (n < 41 * 41)
        return true;
    for (std::uint64_t a : kWitnesses)
        if (!miller_rabin_u64(n, a))
            return false;
    return true;
}

bool miller_rabin_big(const Natural& n, const Natural& a) {
    Natural base = a % n;
    if (base == 0)
        return true;
    Natural d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    Natural x = boost::multiprecision::powm(base, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (unsigned i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1)
            return true;
    }
    return false;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Brent's cycle variant with batched gcds. Returns a nontrivial factor.
// Deterministic parameter schedule so repeated runs factor identically.
std::uint64_t rho_u64(std::uint64_t n, std::uint64_t& budget) {
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t x = 2, y = 2, d = 1, q = 1, ys = y;
        std::uint64_t r = 1;
        const std::uint64_t batch = 128;
        auto step = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
        while (d == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i)
                y = step(y);
            for (std::uint64_t k = 0; k < r && d == 1; k += batch) {
                ys = y;
                std::uint64_t lim = std::min(batch, r - k);
                if (budget < lim)
                    throw FactorizationBudgetExceeded("factorize: rho iteration budget exhausted");
                budget -= lim;
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = step(y);
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                d = gcd_u64(q, n);
            }
            r <<= 1;
        }
        if (d == n) {
            // Backtrack one step at a time from the last batch start.
            d = 1;
            while (d == 1) {
                ys = step(ys);
                d = gcd_u64(x > ys ? x - ys : ys - x, n);
            }
        }
        if (d != n)
            return d;
    }
}

Natural rho_big(const Natural& n, std::uint64_t& budget) {
    for (std::uint64_t c = 1;; ++c) {
        Natural x = 2, y = 2, d = 1, q = 1, ys = y;
        std::uint64_t r = 1;
        const std::uint64_t batch = 64;
        auto step = [&](const Natural& v) { return ((v * v) % n + c) % n; };
        while (d == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i)
                y = step(y);
            for (std::uint64_t k = 0; k < r && d == 1; k += batch) {
                ys = y;
                std::uint64_t lim = std::min(batch, r - k);
                if (budget < lim)
                    throw FactorizationBudgetExceeded("factorize: rho iteration budget exhausted");
                budget -= lim;
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = step(y);
                    q = (q * abs(x - y)) % n;
                }
                d = gcd(q, n);
            }
            r <<= 1;
        }
        if (d == n) {
            d = 1;
            while (d == 1) {
                ys = step(ys);
                d = gcd(abs(x - ys), n);
            }
        }
        if (d != n)
            return d;
    }
}

void factor_u64_into(std::uint64_t n, std::vector<std::pair<std::uint64_t, unsigned>>& out,
                     std::uint64_t& budget) {
    const Sieve& sv = sieve();
    if (n <= kSieveLimit) {
        while (n > 1) {
            std::uint32_t p = sv.spf[n];
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
        return;
    }
    for (std::uint32_t p : sv.primes) {
        if (static_cast<std::uint64_t>(p) * p > n)
            break;
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
            if (n <= kSieveLimit) {
                factor_u64_into(n, out, budget);
                return;
            }
        }
    }
    if (n == 1)
        return;
    if (is_prime_u64(n)) {
        out.emplace_back(n, 1);
        return;
    }
    std::uint64_t d = rho_u64(n, budget);
    factor_u64_into(d, out, budget);
    factor_u64_into(n / d, out, budget);
}

void factor_big_into(Natural n, std::vector<std::pair<Natural, unsigned>>& out, std::uint64_t& budget);

void split_big(const Natural& n, std::vector<std::pair<Natural, unsigned>>& out, std::uint64_t& budget) {
    if (fits_u64(n)) {
        std::vector<std::pair<std::uint64_t, unsigned>> small;
        factor_u64_into(as_u64(n), small, budget);
        for (auto& [p, e] : small)
            out.emplace_back(Natural(p), e);
        return;
    }
    if (is_prime(n)) {
        out.emplace_back(n, 1);
        return;
    }
    Natural d = rho_big(n, budget);
    split_big(d, out, budget);
    split_big(n / d, out, budget);
}

void factor_big_into(Natural n, std::vector<std::pair<Natural, unsigned>>& out, std::uint64_t& budget) {
    const Sieve& sv = sieve();
    for (std::uint32_t p : sv.primes) {
        if (fits_u64(n))
            break;
        if (boost::multiprecision::integer_modulus(n, p) == 0) {
            unsigned e = 0;
            while (boost::multiprecision::integer_modulus(n, p) == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(Natural(p), e);
        }
    }
    if (n == 1)
        return;
    split_big(n, out, budget);
}

}  // namespace

Factorization::Factorization(std::vector<FactorPower> factors) : factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i].exponent == 0)
            throw DomainError("Factorization: zero exponent");
        if (i > 0 && factors_[i - 1].prime >= factors_[i].prime)
            throw DomainError("Factorization: primes not strictly ascending");
    }
}

bool Factorization::squarefree() const {
    return std::all_of(factors_.begin(), factors_.end(),
                       [](const FactorPower& f) { return f.exponent == 1; });
}

Natural Factorization::value() const {
    Natural v = 1;
    for (const auto& f : factors_)
        v *= boost::multiprecision::pow(f.prime, f.exponent);
    return v;
}

Natural Factorization::radical() const {
    Natural r = 1;
    for (const auto& f : factors_)
        r *= f.prime;
    return r;
}

unsigned Factorization::exponent_of(const Natural& p) const {
    for (const auto& f : factors_)
        if (f.prime == p)
            return f.exponent;
    return 0;
}

std::vector<Natural> Factorization::divisors() const {
    std::vector<Natural> divs{Natural(1)};
    for (const auto& f : factors_) {
        std::size_t existing = divs.size();
        Natural pk = 1;
        for (unsigned e = 1; e <= f.exponent; ++e) {
            pk *= f.prime;
            for (std::size_t i = 0; i < existing; ++i)
                divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

bool is_prime(const Natural& n) {
    if (n < 2)
        return false;
    if (fits_u64(n))
        return is_prime_u64(as_u64(n));
    for (std::uint64_t p : kWitnesses)
        if (boost::multiprecision::integer_modulus(n, static_cast<std::uint32_t>(p)) == 0)
            return false;
    for (std::uint64_t a : kWitnesses)
        if (!miller_rabin_big(n, Natural(a)))
            return false;
    if (n < deterministic_limit())
        return true;
    // Probabilistic regime: fixed seed, so the witness schedule is
    // reproducible run to run.
    std::mt19937_64 rng(0x9d3779b97f4a7c15ULL);
    const unsigned words = static_cast<unsigned>(boost::multiprecision::msb(n) / 64 + 1);
    const Natural span = n - 3;
    for (int round = 0; round < 40; ++round) {
        Natural raw = 0;
        for (unsigned w = 0; w < words; ++w)
            raw = (raw << 64) | Natural(rng());
        Natural a = 2 + raw % span;
        if (!miller_rabin_big(n, a))
            return false;
    }
    return true;
}

Factorization factorize(const Natural& n) {
    if (n < 2)
        throw DomainError("factorize: argument must be >= 2");
    std::uint64_t budget = config::factor_budget();
    std::vector<std::pair<Natural, unsigned>> raw;
    if (fits_u64(n)) {
        std::vector<std::pair<std::uint64_t, unsigned>> small;
        factor_u64_into(as_u64(n), small, budget);
        for (auto& [p, e] : small)
            raw.emplace_back(Natural(p), e);
    } else {
        factor_big_into(n, raw, budget);
    }
    std::sort(raw.begin(), raw.end());
    std::vector<FactorPower> merged;
    for (auto& [p, e] : raw) {
        if (!merged.empty() && merged.back().prime == p)
            merged.back().exponent += e;
        else
            merged.push_back({p, e});
    }
    return Factorization(std::move(merged));
}

Natural mod_pow(const Natural& base, const Natural& exp, const Natural& m) {
    if (m < 1)
        throw DomainError("mod_pow: modulus must be >= 1");
    if (m == 1)
        return 0;
    if (fits_u64(m)) {
        const std::uint64_t mu = as_u64(m);
        std::uint64_t b = as_u64(base % m);
        if (exp == 0)
            return 1;
        std::uint64_t result = 1;
        for (long i = static_cast<long>(boost::multiprecision::msb(exp)); i >= 0; --i) {
            result = mulmod_u64(result, result, mu);
            if (boost::multiprecision::bit_test(exp, static_cast<unsigned>(i)))
                result = mulmod_u64(result, b, mu);
        }
        return result;
    }
    return boost::multiprecision::powm(base % m, exp, m);
}

Natural multiplicative_order(const Natural& b, const Natural& n) {
    if (n < 1)
        throw DomainError("multiplicative_order: modulus must be >= 1");
    if (n == 1)
        return 1;
    if (gcd(b % n, n) != 1)
        throw NotCoprime("multiplicative_order: base not coprime to modulus");
    Natural order = 1;
    for (const auto& f : factorize(n)) {
        const Natural m = boost::multiprecision::pow(f.prime, f.exponent);
        // Descend from phi(p^e), stripping primes while b^(t/q) stays 1.
        Natural t = (m / f.prime) * (f.prime - 1);
        std::vector<Natural> qs;
        if (f.exponent > 1)
            qs.push_back(f.prime);
        if (f.prime > 2)
            for (const auto& g : factorize(f.prime - 1))
                qs.push_back(g.prime);
        for (const auto& q : qs) {
            while (t % q == 0 && mod_pow(b, t / q, m) == 1)
                t /= q;
        }
        order = lcm(order, t);
    }
    return order;
}

Natural p_adic_valuation(const Natural& p, const Natural& n) {
    if (p < 2)
        throw DomainError("p_adic_valuation: p must be >= 2");
    if (n < 1)
        throw DomainError("p_adic_valuation: n must be >= 1");
    if (fits_u64(n)) {
        std::uint64_t m = as_u64(n);
        if (!fits_u64(p))
            return 0;
        std::uint64_t pp = as_u64(p);
        std::uint64_t v = 0;
        while (m % pp == 0) {
            m /= pp;
            ++v;
        }
        return v;
    }
    Natural m = n, v = 0;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return v;
}

Natural euler_phi(const Natural& n) {
    if (n < 1)
        throw DomainError("euler_phi: n must be >= 1");
    if (n == 1)
        return 1;
    Natural phi = 1;
    for (const auto& f : factorize(n))
        phi *= boost::multiprecision::pow(f.prime, f.exponent - 1) * (f.prime - 1);
    return phi;
}

int moebius(const Natural& n) {
    if (n < 1)
        throw DomainError("moebius: n must be >= 1");
    if (n == 1)
        return 1;
    const Factorization f = factorize(n);
    if (!f.squarefree())
        return 0;
    return f.omega() % 2 == 0 ? 1 : -1;
}

namespace {

// Inverse of a modulo m, gcd(a, m) = 1. Plain extended Euclid.
Natural inverse_mod(Natural a, const Natural& m) {
    Natural r0 = m, r1 = a % m, s0 = 0, s1 = 1;
    while (r1 != 0) {
        Natural q = r0 / r1;
        Natural r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        Natural s2 = s0 - q * s1;
        s0 = s1;
        s1 = s2;
    }
    if (r0 != 1)
        throw DomainError("inverse_mod: not invertible");
    return ((s0 % m) + m) % m;
}

}  // namespace

Natural crt_combine(std::span<const Residue> residues) {
    Natural x = 0, modulus = 1;
    for (const auto& res : residues) {
        if (res.modulus < 1)
            throw DomainError("crt_combine: modulus must be >= 1");
        const Natural m = res.modulus;
        const Natural r = res.remainder % m;
        if (gcd(modulus, m) != 1)
            throw ModuliNotCoprime("crt_combine: moduli not pairwise coprime");
        if (m == 1)
            continue;
        Natural shift = (((r - x) % m) + m) % m;
        x += modulus * ((shift * inverse_mod(modulus % m, m)) % m);
        modulus *= m;
    }
    return x;
}

}  // namespace midy

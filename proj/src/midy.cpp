#include "midy/midy.hpp"

#include <cassert>
#include <cstdint>
#include <numeric>

#include "midy/config.hpp"
#include "midy/cyclotomic.hpp"
#include "midy/errors.hpp"

namespace midy {

namespace {

Natural canonical_base(const Natural& b, const Natural& N) {
    if (N < 2)
        throw DomainError("modulus must be >= 2");
    Natural bc = b % N;
    if (gcd(bc, N) != 1)
        throw NotCoprime("base not coprime to modulus");
    return bc;
}

// Theorem-side membership test with the factorization of N and |b|_N already
// in hand: nu_p(N) <= nu_p(d) for every prime p | gcd(b^k - 1, N).
bool property_core(const Natural& N, const Factorization& fact_N, const Natural& b,
                   const Natural& order, const Natural& d) {
    const Natural k = order / d;
    const Natural bk = mod_pow(b, k, N);
    const Natural g = gcd((bk + N - 1) % N, N);
    if (g == 1)
        return true;
    for (const auto& fp : fact_N) {
        if (g % fp.prime != 0)
            continue;
        if (Natural(fp.exponent) > p_adic_valuation(fp.prime, d))
            return false;
    }
    return true;
}

void require_oracle_bounds(const Natural& N, const Natural& order) {
    const std::uint64_t bound = config::oracle_bound();
    if (!fits_u64(N) || as_u64(N) > bound || !fits_u64(order) || as_u64(order) > bound)
        throw OracleBoundExceeded("oracle: N or |b|_N above the configured oracle bound");
}

// Sum of the d length-k blocks of `digits`, checked for divisibility by
// b^k - 1. Block j contributes digit[j*k + pos] at weight b^(k-1-pos), so the
// per-position column sums are accumulated first and the divisibility test
// normalizes them to base b and folds the overflow head (b^k == 1 + (b^k - 1)).
bool block_sum_divisible_u64(const std::vector<std::uint64_t>& digits, std::uint64_t b,
                             std::uint64_t k, std::uint64_t d) {
    std::vector<std::uint64_t> acc(k, 0);
    for (std::uint64_t j = 0; j < d; ++j)
        for (std::uint64_t pos = 0; pos < k; ++pos)
            acc[pos] += digits[j * k + pos];
    std::vector<std::uint64_t> tail(k);
    std::uint64_t carry = 0;
    for (std::uint64_t pos = k; pos-- > 0;) {
        std::uint64_t val = acc[pos] + carry;
        tail[pos] = val % b;
        carry = val / b;
    }
    while (carry > 0) {
        std::uint64_t add = carry;
        carry = 0;
        for (std::uint64_t pos = k; pos-- > 0 && add;) {
            std::uint64_t val = tail[pos] + add;
            tail[pos] = val % b;
            add = val / b;
        }
        carry = add;
    }
    bool all_zero = true, all_max = true;
    for (std::uint64_t pos = 0; pos < k; ++pos) {
        all_zero = all_zero && tail[pos] == 0;
        all_max = all_max && tail[pos] == b - 1;
    }
    return all_zero || all_max;
}

struct DivisorCheck {
    std::uint64_t d;
    bool holds = true;
};

// One pass over U_N: extracts each period once and tests every divisor
// against it. Entries start true and drop to false at the first failing x.
void oracle_scan_all_u64(std::uint64_t N, std::uint64_t b, std::uint64_t L,
                         std::vector<DivisorCheck>& checks) {
    std::vector<std::uint64_t> digits(L);
    for (std::uint64_t x = 1; x < N; ++x) {
        if (std::gcd(x, N) != 1)
            continue;
        std::uint64_t r = x;
        for (std::uint64_t i = 0; i < L; ++i) {
            std::uint64_t v = r * b;
            digits[i] = v / N;
            r = v % N;
        }
        assert(r == x);  // |b|_N is the period length
        bool any_alive = false;
        for (auto& check : checks) {
            if (!check.holds)
                continue;
            check.holds = block_sum_divisible_u64(digits, b, L / check.d, check.d);
            any_alive = any_alive || check.holds;
        }
        if (!any_alive)
            return;
    }
}

bool oracle_scan_u64(std::uint64_t N, std::uint64_t b, std::uint64_t L, std::uint64_t d) {
    std::vector<DivisorCheck> checks{{d, true}};
    oracle_scan_all_u64(N, b, L, checks);
    return checks.front().holds;
}

bool oracle_scan_big(const Natural& N, const Natural& b, std::uint64_t L, std::uint64_t d) {
    const std::uint64_t k = L / d;
    std::vector<Natural> digits(L);
    const std::uint64_t n_small = as_u64(N);
    for (std::uint64_t x = 1; x < n_small; ++x) {
        if (gcd(Natural(x), N) != 1)
            continue;
        Natural r = x;
        for (std::uint64_t i = 0; i < L; ++i) {
            Natural v = r * b;
            digits[i] = v / N;
            r = v % N;
        }
        std::vector<Natural> acc(k, 0);
        for (std::uint64_t j = 0; j < d; ++j)
            for (std::uint64_t pos = 0; pos < k; ++pos)
                acc[pos] += digits[j * k + pos];
        Natural sum = 0;
        for (std::uint64_t pos = 0; pos < k; ++pos)
            sum = sum * b + acc[pos];
        if (sum % (boost::multiprecision::pow(b, static_cast<unsigned>(k)) - 1) != 0)
            return false;
    }
    return true;
}

// Base-b digits of v, most significant first, left-padded to pad_to.
std::vector<Natural> digits_base_b(Natural v, const Natural& b, std::uint64_t pad_to) {
    std::vector<Natural> rev;
    if (fits_u64(b) && as_u64(b) <= (std::uint64_t(1) << 31)) {
        // Peel several digits per bignum division.
        const std::uint64_t bu = as_u64(b);
        std::uint64_t chunk = bu;
        unsigned per = 1;
        while (chunk <= (std::uint64_t(1) << 62) / bu) {
            chunk *= bu;
            ++per;
        }
        while (v != 0) {
            Natural q, r;
            boost::multiprecision::divide_qr(v, Natural(chunk), q, r);
            std::uint64_t block = as_u64(r);
            for (unsigned i = 0; i < per; ++i) {
                rev.emplace_back(block % bu);
                block /= bu;
            }
            v = q;
        }
        while (!rev.empty() && rev.back() == 0)
            rev.pop_back();
    } else {
        while (v != 0) {
            Natural q, r;
            boost::multiprecision::divide_qr(v, b, q, r);
            rev.push_back(std::move(r));
            v = q;
        }
    }
    while (rev.size() < pad_to)
        rev.emplace_back(0);
    return {rev.rbegin(), rev.rend()};
}

}  // namespace

bool has_midy_property(const Natural& N, const Natural& b, const Natural& d) {
    canonical_base(b, N);
    if (d < 2)
        throw DomainError("has_midy_property: d must exceed 1");
    const Natural order = multiplicative_order(b, N);
    if (order % d != 0)
        throw NotADivisor("has_midy_property: d does not divide |b|_N");
    return property_core(N, factorize(N), b, order, d);
}

bool has_midy_property_oracle(const Natural& N, const Natural& b, const Natural& d) {
    canonical_base(b, N);
    if (d < 2)
        throw DomainError("has_midy_property_oracle: d must exceed 1");
    if (b < 2)
        throw DomainError("has_midy_property_oracle: base must be >= 2");
    const Natural order = multiplicative_order(b, N);
    if (order % d != 0)
        throw NotADivisor("has_midy_property_oracle: d does not divide |b|_N");
    require_oracle_bounds(N, order);
    const std::uint64_t L = as_u64(order);
    const std::uint64_t dd = as_u64(d);
    if (as_u64(N) <= (std::uint64_t(1) << 31) && fits_u64(b) && as_u64(b) <= (std::uint64_t(1) << 31))
        return oracle_scan_u64(as_u64(N), as_u64(b), L, dd);
    return oracle_scan_big(N, b, L, dd);
}

BlockDecomposition block_decomposition(const Natural& N, const Natural& b, const Natural& d,
                                       const Natural& x) {
    canonical_base(b, N);
    if (b < 2)
        throw DomainError("block_decomposition: base must be >= 2");
    if (x < 1 || x >= N || gcd(x, N) != 1)
        throw DomainError("block_decomposition: x must lie in U_N");
    if (d < 1)
        throw DomainError("block_decomposition: d must be >= 1");
    const Natural order = multiplicative_order(b, N);
    if (order % d != 0)
        throw NotADivisor("block_decomposition: d does not divide |b|_N");
    require_oracle_bounds(N, order);
    const std::uint64_t L = as_u64(order);
    const std::uint64_t dd = as_u64(d);
    const std::uint64_t k = L / dd;

    const Natural repunit = boost::multiprecision::pow(b, static_cast<unsigned>(L)) - 1;
    assert(repunit % N == 0);
    const Natural period_value = x * (repunit / N);

    BlockDecomposition out;
    out.x = x;
    out.block_length = k;
    out.digits = digits_base_b(period_value, b, L);
    out.block_sum = 0;
    out.block_values.reserve(dd);
    for (std::uint64_t j = 0; j < dd; ++j) {
        Natural value = 0;
        for (std::uint64_t pos = 0; pos < k; ++pos)
            value = value * b + out.digits[j * k + pos];
        out.block_sum += value;
        out.block_values.push_back(std::move(value));
    }
    return out;
}

MidySet midy_set_oracle(const Natural& N, const Natural& b) {
    MidySet set;
    set.modulus = N;
    set.base = canonical_base(b, N);
    if (b < 2)
        throw DomainError("midy_set_oracle: base must be >= 2");
    set.order = multiplicative_order(b, N);
    if (set.order == 1)
        return set;
    require_oracle_bounds(N, set.order);
    const std::uint64_t L = as_u64(set.order);
    const std::vector<Natural> divisors = factorize(set.order).divisors();
    if (as_u64(N) <= (std::uint64_t(1) << 31) && fits_u64(b) &&
        as_u64(b) <= (std::uint64_t(1) << 31)) {
        std::vector<DivisorCheck> checks;
        for (const auto& d : divisors)
            if (d > 1)
                checks.push_back({as_u64(d), true});
        oracle_scan_all_u64(as_u64(N), as_u64(b), L, checks);
        for (const auto& check : checks)
            if (check.holds)
                set.members.emplace_back(check.d);
    } else {
        for (const auto& d : divisors)
            if (d > 1 && oracle_scan_big(N, b, L, as_u64(d)))
                set.members.push_back(d);
    }
    return set;
}

MidySet midy_set(const Natural& N, const Natural& b) {
    MidySet set;
    set.modulus = N;
    set.base = canonical_base(b, N);
    set.order = multiplicative_order(b, N);
    if (set.order == 1)
        return set;  // no divisors above 1
    const Factorization fact_N = factorize(N);
    for (const auto& d : factorize(set.order).divisors()) {
        if (d < 2)
            continue;
        if (property_core(N, fact_N, b, set.order, d))
            set.members.push_back(d);
    }
    return set;
}

bool prime_power_midy_check(const Natural& N, const Natural& b, const Natural& q,
                            const Natural& v) {
    canonical_base(b, N);
    if (v < 1)
        throw DomainError("prime_power_midy_check: v must be >= 1");
    if (!is_prime(q))
        throw DomainError("prime_power_midy_check: q must be prime");
    if (!fits_u64(v))
        throw DomainError("prime_power_midy_check: v out of range");
    const Natural order = multiplicative_order(b, N);
    const Natural qv = boost::multiprecision::pow(q, static_cast<unsigned>(as_u64(v)));
    if (order % qv != 0)
        throw NotADivisor("prime_power_midy_check: q^v does not divide |b|_N");

    const Factorization fact_N = factorize(N);
    if (Natural(fact_N.exponent_of(q)) > v)
        return false;
    bool has_other = false;
    Natural min_val = 0;
    for (const auto& fp : fact_N) {
        if (fp.prime == q)
            continue;
        const Natural val = p_adic_valuation(q, multiplicative_order(b, fp.prime));
        if (val == 0)
            return false;
        if (!has_other || val < min_val)
            min_val = val;
        has_other = true;
    }
    if (!has_other)
        return false;
    return p_adic_valuation(q, order) < v + min_val;
}

bool is_midy_number(const Natural& N, const Natural& b) {
    canonical_base(b, N);
    if (N % 2 == 0 || N < 9 || is_prime(N))
        return false;
    const Factorization fact_N = factorize(N);
    const Natural common = multiplicative_order(b, fact_N.factors().front().prime);
    for (std::size_t i = 1; i < fact_N.omega(); ++i)
        if (multiplicative_order(b, fact_N.factors()[i].prime) != common)
            return false;
    // |b|_N equals the shared per-prime order iff b^common == 1 (mod N).
    if (mod_pow(b, common, N) != 1)
        return false;
    return gcd(N, common) == 1;
}

bool is_midy_number_cyclotomic(const Natural& N, const Natural& b) {
    const Natural bc = canonical_base(b, N);
    if (is_prime(N))
        throw DomainError("is_midy_number_cyclotomic: N must be composite");
    const Natural order = multiplicative_order(b, N);
    if (gcd(N, order) != 1)
        throw DomainError("is_midy_number_cyclotomic: gcd(N, |b|_N) must be 1");
    return cyclotomic_eval_mod(order, bc, N) == 0;
}

Natural count_midy_bases(const Natural& N) {
    if (N < 2 || N % 2 == 0)
        throw DomainError("count_midy_bases: N must be odd and >= 3");
    if (is_prime(N))
        throw DomainError("count_midy_bases: N must be composite");
    const Factorization fact_N = factorize(N);
    Natural D = 0;
    for (const auto& fp : fact_N)
        D = gcd(D, fp.prime - 1);
    Natural total = 0;
    for (const auto& d : factorize(D).divisors())
        total += boost::multiprecision::pow(euler_phi(d), static_cast<unsigned>(fact_N.omega()));
    return total;
}

MidyBruteCounts count_midy_bases_brute(const Natural& N) {
    if (N < 2 || N % 2 == 0)
        throw DomainError("count_midy_bases_brute: N must be odd and >= 3");
    if (is_prime(N))
        throw DomainError("count_midy_bases_brute: N must be composite");
    if (!fits_u64(N) || as_u64(N) > config::oracle_bound())
        throw OracleBoundExceeded("count_midy_bases_brute: N above the oracle bound");
    const Factorization fact_N = factorize(N);
    MidyBruteCounts counts{0, 0};
    for (Natural b = 1; b < N; ++b) {
        if (gcd(b, N) != 1)
            continue;
        Natural common = multiplicative_order(b, fact_N.factors().front().prime);
        bool equal = true;
        for (std::size_t i = 1; equal && i < fact_N.omega(); ++i)
            equal = multiplicative_order(b, fact_N.factors()[i].prime) == common;
        if (!equal || mod_pow(b, common, N) != 1)
            continue;
        counts.by_order_equality += 1;
        if (gcd(N, common) == 1)
            counts.by_full_definition += 1;
    }
    return counts;
}

}  // namespace midy

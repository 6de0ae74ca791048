#include "midy/pseudo.hpp"

#include <cstdint>

#include "midy/config.hpp"
#include "midy/errors.hpp"

namespace midy {

namespace {

void require_odd(const Natural& N, const char* who) {
    if (N < 3 || N % 2 == 0)
        throw DomainError(std::string(who) + ": N must be odd and >= 3");
}

void require_coprime(const Natural& N, const Natural& b, const char* who) {
    if (gcd(b % N, N) != 1)
        throw NotCoprime(std::string(who) + ": base not coprime to N");
}

bool miller_condition(const Natural& N, const Natural& b) {
    Natural t = N - 1;
    unsigned s = 0;
    while (t % 2 == 0) {
        t >>= 1;
        ++s;
    }
    Natural x = mod_pow(b, t, N);
    if (x == 1)
        return true;
    for (unsigned i = 0; i < s; ++i) {
        if (x == N - 1)
            return true;
        x = (x * x) % N;
    }
    return false;
}

// 1 + x + ... + x^(q-1) mod m by a double-and-add ladder on the pair
// (sum, power); never materializes the full geometric sum.
Natural geometric_sum_mod(const Natural& x, const Natural& q, const Natural& m) {
    if (m == 1)
        return 0;
    if (fits_u64(m)) {
        const std::uint64_t mu = as_u64(m);
        const std::uint64_t xu = as_u64(x % m);
        std::uint64_t sum = 1 % mu, power = xu;
        for (long i = static_cast<long>(boost::multiprecision::msb(q)) - 1; i >= 0; --i) {
            sum = addmod_u64(mulmod_u64(sum, power, mu), sum, mu);
            power = mulmod_u64(power, power, mu);
            if (boost::multiprecision::bit_test(q, static_cast<unsigned>(i))) {
                sum = addmod_u64(mulmod_u64(sum, xu, mu), 1, mu);
                power = mulmod_u64(power, xu, mu);
            }
        }
        return sum;
    }
    Natural sum = 1, power = x % m;
    for (long i = static_cast<long>(boost::multiprecision::msb(q)) - 1; i >= 0; --i) {
        sum = (sum * power + sum) % m;
        power = (power * power) % m;
        if (boost::multiprecision::bit_test(q, static_cast<unsigned>(i))) {
            sum = (sum * (x % m) + 1) % m;
            power = (power * x) % m;
        }
    }
    return sum;
}

void require_prime_q(const Natural& q, const char* who) {
    if (!is_prime(q))
        throw DomainError(std::string(who) + ": q must be prime");
}

struct QScan {
    bool result = false;
    std::optional<Natural> witness_i;
};

QScan scan_q_conditions(const Natural& N, const Natural& b, const Natural& q) {
    Natural rest = N - 1;
    std::uint64_t s = 0;
    while (rest % q == 0) {
        rest /= q;
        ++s;
    }
    const Natural& t = rest;
    Natural x = mod_pow(b, t, N);
    if (x == 1)
        return {true, std::nullopt};
    for (std::uint64_t i = 0; i < s; ++i) {
        if (geometric_sum_mod(x, q, N) == 0)
            return {true, Natural(i)};
        x = mod_pow(x, q, N);
    }
    return {false, std::nullopt};
}

}  // namespace

bool is_fermat_psp(const Natural& N, const Natural& b) {
    if (N < 2)
        throw DomainError("is_fermat_psp: N must be >= 2");
    require_coprime(N, b, "is_fermat_psp");
    return mod_pow(b, N - 1, N) == 1;
}

bool is_strong_psp(const Natural& N, const Natural& b) {
    require_odd(N, "is_strong_psp");
    require_coprime(N, b, "is_strong_psp");
    return miller_condition(N, b);
}

bool strong_psp_via_valuation(const Natural& N, const Natural& b) {
    require_odd(N, "strong_psp_via_valuation");
    require_coprime(N, b, "strong_psp_via_valuation");
    if (mod_pow(b, N - 1, N) != 1)
        return false;
    const Factorization fact = factorize(N);
    Natural val;
    bool first = true;
    for (const auto& fp : fact) {
        Natural v = p_adic_valuation(Natural(2), multiplicative_order(b, fp.prime));
        if (first) {
            val = v;
            first = false;
        } else if (v != val) {
            return false;
        }
    }
    return true;
}

bool is_carmichael(const Natural& N) {
    if (N < 3)
        throw DomainError("is_carmichael: N must be >= 3");
    if (is_prime(N))
        return false;
    const Factorization fact = factorize(N);
    if (!fact.squarefree())
        return false;
    for (const auto& fp : fact)
        if ((N - 1) % (fp.prime - 1) != 0)
            return false;
    return true;
}

std::vector<Natural> eligible_q(const Natural& N) {
    require_odd(N, "eligible_q");
    Natural D = 0;
    for (const auto& fp : factorize(N))
        D = gcd(D, fp.prime - 1);
    std::vector<Natural> out;
    if (D > 1)
        for (const auto& fp : factorize(D))
            out.push_back(fp.prime);
    return out;
}

QDecomposition q_decompose(const Natural& N, const Natural& q) {
    require_prime_q(q, "q_decompose");
    if (N < 2 || (N - 1) % q != 0)
        throw DomainError("q_decompose: q does not divide N - 1");
    QDecomposition out;
    out.q = q;
    out.s = 0;
    out.t = N - 1;
    while (out.t % q == 0) {
        out.t /= q;
        out.s += 1;
    }
    return out;
}

QProbableResult is_q_probable_prime(const Natural& N, const Natural& b, const Natural& q,
                                    bool check_hypothesis) {
    require_odd(N, "is_q_probable_prime");
    require_coprime(N, b, "is_q_probable_prime");
    require_prime_q(q, "is_q_probable_prime");
    if ((N - 1) % q != 0)
        throw DomainError("is_q_probable_prime: q does not divide N - 1");
    if (check_hypothesis) {
        for (const auto& fp : factorize(N))
            if ((fp.prime - 1) % q != 0)
                throw HypothesisViolated("is_q_probable_prime: q does not divide p - 1 for p = " +
                                         to_decimal(fp.prime));
    }
    const QScan scan = scan_q_conditions(N, b, q);
    return {scan.result, scan.witness_i};
}

bool is_q_pseudoprime_def(const Natural& N, const Natural& b, const Natural& q) {
    require_odd(N, "is_q_pseudoprime_def");
    require_coprime(N, b, "is_q_pseudoprime_def");
    require_prime_q(q, "is_q_pseudoprime_def");
    const Factorization fact = factorize(N);
    for (const auto& fp : fact)
        if ((fp.prime - 1) % q != 0)
            throw HypothesisViolated("is_q_pseudoprime_def: q does not divide p - 1 for p = " +
                                     to_decimal(fp.prime));
    if (mod_pow(b, N - 1, N) != 1)
        return false;
    Natural val;
    bool first = true;
    for (const auto& fp : fact) {
        Natural v = p_adic_valuation(q, multiplicative_order(b, fp.prime));
        if (first) {
            val = v;
            first = false;
        } else if (v != val) {
            return false;
        }
    }
    return true;
}

std::optional<Natural> q_divisor_congruence(const Natural& N, const Natural& b, const Natural& q) {
    const QProbableResult res = is_q_probable_prime(N, b, q, true);
    if (!res.result || !res.witness_i)
        return std::nullopt;
    const Natural modulus =
        boost::multiprecision::pow(q, static_cast<unsigned>(as_u64(*res.witness_i)) + 1);
    for (const auto& fp : factorize(N))
        if (fp.prime % modulus != 1)
            throw PostconditionViolated("q_divisor_congruence: prime divisor " +
                                        to_decimal(fp.prime) + " is not 1 mod " +
                                        to_decimal(modulus));
    return modulus;
}

bool carmichael_collapse_check(const Natural& N, const Natural& q, std::span<const Natural> sample) {
    if (!is_carmichael(N))
        throw HypothesisViolated("carmichael_collapse_check: N is not a Carmichael number");
    require_prime_q(q, "carmichael_collapse_check");
    if ((N - 1) % q != 0)
        throw HypothesisViolated("carmichael_collapse_check: q does not divide N - 1");
    for (const auto& fp : factorize(N))
        if ((fp.prime - 1) % q == 0)
            throw HypothesisViolated("carmichael_collapse_check: q divides p - 1 for p = " +
                                     to_decimal(fp.prime));
    const QDecomposition dec = q_decompose(N, q);
    if (sample.empty()) {
        if (!fits_u64(N) || as_u64(N) > config::oracle_bound())
            throw OracleBoundExceeded("carmichael_collapse_check: N above the oracle bound");
        for (Natural b = 1; b < N; ++b) {
            if (gcd(b, N) != 1)
                continue;
            if (mod_pow(b, dec.t, N) != 1)
                return false;
        }
        return true;
    }
    for (const auto& b : sample) {
        require_coprime(N, b, "carmichael_collapse_check");
        if (mod_pow(b, dec.t, N) != 1)
            return false;
    }
    return true;
}

Natural nu_q_of(const Natural& q, const Natural& N) {
    require_prime_q(q, "nu_q_of");
    Natural D = 0;
    for (const auto& fp : factorize(N))
        D = gcd(D, fp.prime - 1);
    if (D == 0)
        return 0;
    return p_adic_valuation(q, D);
}

Natural count_pp_bases(const Natural& N) {
    if (N < 4 || is_prime(N))
        throw DomainError("count_pp_bases: N must be composite");
    Natural total = 1;
    for (const auto& fp : factorize(N))
        total *= gcd(fp.prime - 1, N - 1);
    return total;
}

Natural count_spp_bases(const Natural& N) {
    require_odd(N, "count_spp_bases");
    if (is_prime(N))
        throw DomainError("count_spp_bases: N must be composite");
    const Factorization fact = factorize(N);
    Natural t = N - 1;
    while (t % 2 == 0)
        t >>= 1;
    Natural D = 0;
    for (const auto& fp : fact)
        D = gcd(D, fp.prime - 1);
    const std::uint64_t nu = as_u64(p_adic_valuation(Natural(2), D));
    const unsigned omega = static_cast<unsigned>(fact.omega());
    // 1 + (2^(nu w) - 1)/(2^w - 1) as the geometric sum, exactly.
    Natural multiplier = 1;
    Natural term = 1;
    const Natural step = boost::multiprecision::pow(Natural(2), omega);
    for (std::uint64_t i = 0; i < nu; ++i) {
        multiplier += term;
        term *= step;
    }
    Natural total = multiplier;
    for (const auto& fp : fact)
        total *= gcd(fp.prime - 1, t);
    return total;
}

Natural count_qpp_bases(const Natural& N, const Natural& q) {
    require_odd(N, "count_qpp_bases");
    require_prime_q(q, "count_qpp_bases");
    const Factorization fact = factorize(N);
    for (const auto& fp : fact)
        if (fp.prime % q != 1)
            throw HypothesisViolated("count_qpp_bases: prime divisor " + to_decimal(fp.prime) +
                                     " is not 1 mod q");
    const QDecomposition dec = q_decompose(N, q);
    Natural D = 0;
    for (const auto& fp : fact)
        D = gcd(D, fp.prime - 1);
    const std::uint64_t nu = as_u64(p_adic_valuation(q, D));
    const unsigned omega = static_cast<unsigned>(fact.omega());
    const Natural qm1_pow = boost::multiprecision::pow(q - 1, omega);
    const Natural step = boost::multiprecision::pow(q, omega);
    Natural geo = 0, term = 1;
    for (std::uint64_t i = 0; i < nu; ++i) {
        geo += term;
        term *= step;
    }
    Natural total = 1 + qm1_pow * geo;
    for (const auto& fp : fact)
        total *= gcd(fp.prime - 1, dec.t);
    return total;
}

Natural count_bases_brute(const Natural& N, const BasePredicate& predicate) {
    if (N < 3)
        throw DomainError("count_bases_brute: N must be >= 3");
    if (!fits_u64(N) || as_u64(N) > config::oracle_bound())
        throw OracleBoundExceeded("count_bases_brute: N above the oracle bound");
    using Kind = BasePredicate::Kind;
    if (predicate.kind == Kind::strong || predicate.kind == Kind::midy_order_equality)
        require_odd(N, "count_bases_brute");

    Factorization fact;
    if (predicate.kind == Kind::midy_order_equality)
        fact = factorize(N);

    Natural count = 0;
    for (Natural b = 1; b < N; ++b) {
        if (gcd(b, N) != 1)
            continue;
        bool hit = false;
        switch (predicate.kind) {
            case Kind::fermat:
                hit = mod_pow(b, N - 1, N) == 1;
                break;
            case Kind::strong:
                hit = miller_condition(N, b);
                break;
            case Kind::q_probable:
                hit = is_q_probable_prime(N, b, predicate.q, false).result;
                break;
            case Kind::midy_order_equality: {
                Natural common = multiplicative_order(b, fact.factors().front().prime);
                hit = true;
                for (std::size_t i = 1; hit && i < fact.omega(); ++i)
                    hit = multiplicative_order(b, fact.factors()[i].prime) == common;
                hit = hit && mod_pow(b, common, N) == 1;
                break;
            }
        }
        if (hit)
            count += 1;
    }
    return count;
}

}  // namespace midy

#include <doctest.h>

#include <numeric>
#include <string>

#include "midy/arith.hpp"
#include "midy/config.hpp"
#include "midy/errors.hpp"
#include "midy/midy.hpp"

using midy::Natural;

namespace {

std::string digit_string(const std::vector<Natural>& digits) {
    std::string s;
    for (const auto& d : digits)
        s += midy::to_decimal(d);
    return s;
}

std::vector<Natural> divisors_above_one(const Natural& n) {
    std::vector<Natural> out;
    if (n < 2)
        return out;
    for (const auto& d : midy::factorize(n).divisors())
        if (d > 1)
            out.push_back(d);
    return out;
}

}  // namespace

TEST_CASE("block decomposition of 1/13 base 10") {
    const auto dec = midy::block_decomposition(Natural(13), Natural(10), Natural(3), Natural(1));
    CHECK(digit_string(dec.digits) == "076923");
    REQUIRE(dec.block_values.size() == 3);
    CHECK(dec.block_values[0] == 7);
    CHECK(dec.block_values[1] == 69);
    CHECK(dec.block_values[2] == 23);
    CHECK(dec.block_sum == 99);
    CHECK(dec.block_length == 2);

    const auto halves = midy::block_decomposition(Natural(13), Natural(10), Natural(2), Natural(1));
    CHECK(halves.block_values[0] == 76);
    CHECK(halves.block_values[1] == 923);
    CHECK(halves.block_sum == 999);
}

TEST_CASE("block decomposition of 1/49 base 10") {
    const auto dec = midy::block_decomposition(Natural(49), Natural(10), Natural(14), Natural(1));
    CHECK(digit_string(dec.digits) == "020408163265306122448979591836734693877551");
    REQUIRE(dec.block_values.size() == 14);
    CHECK(dec.block_values[0] == 20);
    CHECK(dec.block_values[1] == 408);
    CHECK(dec.block_values[13] == 551);
    CHECK(dec.block_sum == 6993);
    CHECK(dec.block_sum == 7 * 999);
}

TEST_CASE("block decomposition invariants") {
    for (std::uint64_t N : {21, 27, 33, 49, 91}) {
        for (std::uint64_t b : {2, 3, 10}) {
            if (std::gcd(N, b) != 1)
                continue;
            const Natural order = midy::multiplicative_order(Natural(b), Natural(N));
            for (const auto& d : divisors_above_one(order)) {
                for (std::uint64_t x = 1; x < N; x += 3) {
                    if (std::gcd(x, N) != 1)
                        continue;
                    const auto dec = midy::block_decomposition(Natural(N), Natural(b), d, Natural(x));
                    CHECK(dec.digits.size() == order);
                    const Natural bk =
                        boost::multiprecision::pow(Natural(b), static_cast<unsigned>(midy::as_u64(dec.block_length)));
                    Natural sum = 0;
                    Natural concat = 0;
                    for (const auto& block : dec.block_values) {
                        CHECK(block < bk);
                        sum += block;
                        concat = concat * bk + block;
                    }
                    CHECK(sum == dec.block_sum);
                    Natural from_digits = 0;
                    for (const auto& digit : dec.digits)
                        from_digits = from_digits * b + digit;
                    CHECK(concat == from_digits);
                }
            }
        }
    }
}

TEST_CASE("has_midy_property fixtures") {
    CHECK(midy::has_midy_property(Natural(13), Natural(10), Natural(3)));
    CHECK_FALSE(midy::has_midy_property(Natural(49), Natural(10), Natural(7)));
    CHECK(midy::has_midy_property(Natural(49), Natural(10), Natural(14)));
    CHECK_THROWS_AS(midy::has_midy_property(Natural(13), Natural(10), Natural(4)),
                    midy::NotADivisor);
    CHECK_THROWS_AS(midy::has_midy_property(Natural(91), Natural(7), Natural(2)),
                    midy::NotCoprime);
    CHECK_THROWS_AS(midy::has_midy_property(Natural(13), Natural(10), Natural(1)),
                    midy::DomainError);
}

TEST_CASE("has_midy_property_oracle fixtures") {
    CHECK(midy::has_midy_property_oracle(Natural(13), Natural(10), Natural(3)));
    CHECK(midy::has_midy_property_oracle(Natural(49), Natural(10), Natural(14)));
    CHECK(midy::has_midy_property_oracle(Natural(13), Natural(10), Natural(2)));
    CHECK_FALSE(midy::has_midy_property_oracle(Natural(49), Natural(10), Natural(7)));
}

TEST_CASE("oracles refuse work above the configured bound") {
    midy::config::set_oracle_bound(10);
    CHECK_THROWS_AS(midy::has_midy_property_oracle(Natural(13), Natural(10), Natural(3)),
                    midy::OracleBoundExceeded);
    CHECK_THROWS_AS(midy::block_decomposition(Natural(13), Natural(10), Natural(3), Natural(1)),
                    midy::OracleBoundExceeded);
    CHECK_THROWS_AS(midy::count_midy_bases_brute(Natural(15)), midy::OracleBoundExceeded);
    midy::config::set_oracle_bound(midy::config::kDefaultOracleBound);
    CHECK(midy::has_midy_property_oracle(Natural(13), Natural(10), Natural(3)));
}

TEST_CASE("theorem matches the digit oracle") {
    // Full cross-validation over every divisor of every order.
    for (std::uint64_t N = 3; N <= 1000; N += 2) {
        for (std::uint64_t b = 2; b <= 12; ++b) {
            if (std::gcd(N, b) != 1)
                continue;
            const auto theorem = midy::midy_set(Natural(N), Natural(b));
            const auto oracle = midy::midy_set_oracle(Natural(N), Natural(b));
            if (theorem.members != oracle.members) {
                CAPTURE(N);
                CAPTURE(b);
                FAIL("theorem/oracle disagreement");
            }
        }
    }
    // And spot-check the per-divisor entry point against the batch.
    for (std::uint64_t N : {49, 91, 339, 961}) {
        const Natural order = midy::multiplicative_order(Natural(10), Natural(N));
        for (const auto& d : divisors_above_one(order))
            CHECK(midy::has_midy_property_oracle(Natural(N), Natural(10), d) ==
                  midy::has_midy_property(Natural(N), Natural(10), d));
    }
}

TEST_CASE("midy_set fixtures") {
    auto set = midy::midy_set(Natural(13), Natural(10));
    CHECK(set.order == 6);
    CHECK(set.members == std::vector<Natural>{2, 3, 6});

    set = midy::midy_set(Natural(49), Natural(10));
    CHECK(set.order == 42);
    CHECK(set.members == std::vector<Natural>{2, 3, 6, 14, 21, 42});

    set = midy::midy_set(Natural(7), Natural(10));
    CHECK(set.members == std::vector<Natural>{2, 3, 6});
}

TEST_CASE("midy_set is closed under multiples") {
    for (std::uint64_t N = 3; N <= 400; N += 2) {
        for (std::uint64_t b : {2, 3, 10}) {
            if (std::gcd(N, b) != 1)
                continue;
            const auto set = midy::midy_set(Natural(N), Natural(b));
            for (const auto& d1 : set.members) {
                for (const auto& d2 : divisors_above_one(set.order)) {
                    if (d2 % d1 != 0)
                        continue;
                    CHECK(std::find(set.members.begin(), set.members.end(), d2) !=
                          set.members.end());
                }
            }
        }
    }
}

TEST_CASE("prime_power_midy_check fixtures") {
    CHECK(midy::prime_power_midy_check(Natural(13), Natural(10), Natural(2), Natural(1)));
    CHECK_FALSE(midy::prime_power_midy_check(Natural(49), Natural(10), Natural(7), Natural(1)));
    CHECK_THROWS_AS(midy::prime_power_midy_check(Natural(49), Natural(10), Natural(7), Natural(2)),
                    midy::NotADivisor);
    CHECK_THROWS_AS(midy::prime_power_midy_check(Natural(49), Natural(10), Natural(6), Natural(1)),
                    midy::DomainError);
}

TEST_CASE("prime_power_midy_check agrees with the membership theorem") {
    for (std::uint64_t N = 3; N <= 400; N += 2) {
        for (std::uint64_t b = 2; b <= 12; ++b) {
            if (std::gcd(N, b) != 1)
                continue;
            const Natural order = midy::multiplicative_order(Natural(b), Natural(N));
            for (const auto& d : divisors_above_one(order)) {
                const auto fact = midy::factorize(d);
                if (fact.omega() != 1)
                    continue;  // prime powers only
                const bool structural = midy::prime_power_midy_check(
                    Natural(N), Natural(b), fact.factors()[0].prime,
                    Natural(fact.factors()[0].exponent));
                const bool membership = midy::has_midy_property(Natural(N), Natural(b), d);
                if (structural != membership) {
                    CAPTURE(N);
                    CAPTURE(b);
                    CAPTURE(midy::to_decimal(d));
                    FAIL("prime-power characterization disagreement");
                }
            }
        }
    }
}

TEST_CASE("is_midy_number: the 91 triad and friends") {
    CHECK(midy::is_midy_number(Natural(91), Natural(9)));
    CHECK(midy::is_midy_number(Natural(91), Natural(16)));
    CHECK_FALSE(midy::is_midy_number(Natural(91), Natural(53)));
    CHECK((9 * 16) % 91 == 53);  // bases not closed under multiplication
    CHECK(midy::is_midy_number(Natural(2047), Natural(2)));
    CHECK(midy::is_midy_number(Natural(91), Natural(1)));    // |1|_N = 1 everywhere
    CHECK(midy::is_midy_number(Natural(91), Natural(90)));   // |N-1|_N = 2 everywhere
    CHECK_FALSE(midy::is_midy_number(Natural(13), Natural(10)));  // prime
    CHECK_FALSE(midy::is_midy_number(Natural(15), Natural(2)));
    CHECK_THROWS_AS(midy::is_midy_number(Natural(91), Natural(13)), midy::NotCoprime);
}

TEST_CASE("is_midy_number_cyclotomic fixtures") {
    CHECK(midy::is_midy_number_cyclotomic(Natural(91), Natural(9)));
    CHECK(midy::is_midy_number_cyclotomic(Natural(91), Natural(10)));
    CHECK_FALSE(midy::is_midy_number_cyclotomic(Natural(91), Natural(53)));
}

TEST_CASE("three characterizations of Midy numbers agree") {
    for (std::uint64_t N = 9; N <= 1500; N += 2) {
        if (midy::is_prime(Natural(N)))
            continue;
        for (std::uint64_t b = 2; b <= 12; ++b) {
            if (std::gcd(N, b) != 1)
                continue;
            const Natural order = midy::multiplicative_order(Natural(b), Natural(N));
            const bool order_route = midy::is_midy_number(Natural(N), Natural(b));
            if (gcd(Natural(N), order) != 1) {
                CHECK_FALSE(order_route);
                continue;
            }
            const bool cyclotomic_route = midy::is_midy_number_cyclotomic(Natural(N), Natural(b));
            const auto set = midy::midy_set(Natural(N), Natural(b));
            const bool all_divisors = set.members == divisors_above_one(order);
            CHECK(order_route == cyclotomic_route);
            CHECK(order_route == all_divisors);
        }
    }
}

TEST_CASE("divisor heredity and power closure of Midy numbers") {
    for (std::uint64_t N = 9; N <= 3000; N += 2) {
        if (midy::is_prime(Natural(N)))
            continue;
        for (std::uint64_t b : {2, 3, 5, 9, 10, 16}) {
            if (std::gcd(N, b) != 1 || !midy::is_midy_number(Natural(N), Natural(b)))
                continue;
            const Natural order = midy::multiplicative_order(Natural(b), Natural(N));
            for (const auto& n : divisors_above_one(Natural(N))) {
                CHECK(midy::multiplicative_order(Natural(b), n) == order);
                if (!midy::is_prime(n))
                    CHECK(midy::is_midy_number(n, Natural(b)));
            }
            // Powers of b stay certifying bases as long as they stay units != 1.
            for (unsigned j = 2; j <= 5; ++j) {
                const Natural bj = midy::mod_pow(Natural(b), Natural(j), Natural(N));
                if (bj == 1 || gcd(bj, Natural(N)) != 1)
                    continue;
                CHECK(midy::is_midy_number(Natural(N), bj));
            }
        }
    }
}

TEST_CASE("count_midy_bases formula and brute tallies") {
    CHECK(midy::count_midy_bases(Natural(91)) == 10);
    const auto brute91 = midy::count_midy_bases_brute(Natural(91));
    CHECK(brute91.by_order_equality == 10);
    CHECK(brute91.by_full_definition == 10);

    CHECK(midy::count_midy_bases(Natural(9)) == 2);
    const auto brute9 = midy::count_midy_bases_brute(Natural(9));
    CHECK(brute9.by_order_equality == 2);
    CHECK(brute9.by_full_definition == 2);

    // The reconciliation fixture: formula and exhaustive scan agree on 2
    // (bases 1 and 14; every other unit has mixed orders mod 3 and mod 5).
    CHECK(midy::count_midy_bases(Natural(15)) == 2);
    const auto brute15 = midy::count_midy_bases_brute(Natural(15));
    CHECK(brute15.by_order_equality == 2);
    CHECK(brute15.by_full_definition == 2);

    CHECK_THROWS_AS(midy::count_midy_bases(Natural(10)), midy::DomainError);
    CHECK_THROWS_AS(midy::count_midy_bases(Natural(13)), midy::DomainError);
}

TEST_CASE("count_midy_bases matches the scan, squarefree or not") {
    for (std::uint64_t N = 9; N <= 609; N += 2) {
        if (midy::is_prime(Natural(N)))
            continue;
        const auto brute = midy::count_midy_bases_brute(Natural(N));
        CHECK(midy::count_midy_bases(Natural(N)) == brute.by_order_equality);
        CHECK(brute.by_order_equality == brute.by_full_definition);
    }
}

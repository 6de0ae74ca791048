#include <doctest.h>

#include "midy/arith.hpp"
#include "midy/cyclotomic.hpp"
#include "midy/errors.hpp"
#include "midy/midy.hpp"

using midy::Natural;
using Verdict = midy::GeneratorOutcome::Verdict;

TEST_CASE("cyclotomic_eval fixtures") {
    CHECK(midy::cyclotomic_eval(Natural(1), Natural(7)) == 6);
    CHECK(midy::cyclotomic_eval(Natural(2), Natural(9)) == 10);
    CHECK(midy::cyclotomic_eval(Natural(11), Natural(2)) == (Natural(1) << 11) - 1);
    CHECK(midy::cyclotomic_eval(Natural(6), Natural(10)) == 10 * 10 - 10 + 1);
    CHECK(midy::cyclotomic_eval(Natural(3), Natural(4)) == 21);
    CHECK_THROWS_AS(midy::cyclotomic_eval(Natural(0), Natural(2)), midy::DomainError);
    CHECK_THROWS_AS(midy::cyclotomic_eval(Natural(5), Natural(1)), midy::DomainError);
}

TEST_CASE("product of Phi_d(b) over d | n recovers b^n - 1") {
    for (std::uint64_t n = 1; n <= 60; ++n) {
        for (std::uint64_t b = 2; b <= 10; ++b) {
            Natural product = 1;
            for (std::uint64_t d = 1; d <= n; ++d)
                if (n % d == 0)
                    product *= midy::cyclotomic_eval(Natural(d), Natural(b));
            CHECK(product == boost::multiprecision::pow(Natural(b), static_cast<unsigned>(n)) - 1);
        }
    }
}

TEST_CASE("cyclotomic_eval_mod agrees with the exact route") {
    const Natural mods[] = {Natural(91), Natural(97), Natural(12068159),
                            Natural("18446744073709551615"),  // top of the u64 fast path
                            Natural("2333379336546216408131111533710540349903201")};
    for (std::uint64_t n = 1; n <= 150; n += (n < 20 ? 1 : 7)) {
        for (std::uint64_t b : {2, 10, 12}) {
            const Natural exact = midy::cyclotomic_eval(Natural(n), Natural(b));
            for (const auto& m : mods)
                CHECK(midy::cyclotomic_eval_mod(Natural(n), Natural(b), m) == exact % m);
        }
    }
}

TEST_CASE("gcd_n_phi fixtures and dichotomy") {
    CHECK(midy::gcd_n_phi(Natural(11), Natural(2)) == 1);
    CHECK(midy::gcd_n_phi(Natural(6), Natural(10)) == 1);
    CHECK(midy::gcd_n_phi(Natural(3), Natural(4)) == 3);
    for (std::uint64_t n = 3; n <= 120; ++n) {
        for (std::uint64_t b = 2; b <= 6; ++b) {
            const Natural g = midy::gcd_n_phi(Natural(n), Natural(b));
            const Natural largest = midy::factorize(Natural(n)).factors().back().prime;
            CHECK((g == 1 || g == largest));
        }
    }
}

TEST_CASE("midy_generator fixtures") {
    auto out = midy::midy_generator(Natural(11), Natural(2));
    CHECK(out.value == 2047);
    CHECK(out.verdict == Verdict::MidyNumber);

    out = midy::midy_generator(Natural(6), Natural(10));
    CHECK(out.value == 91);
    CHECK(out.verdict == Verdict::MidyNumber);

    out = midy::midy_generator(Natural(4), Natural(2));
    CHECK(out.value == 5);
    CHECK(out.verdict == Verdict::Prime);

    out = midy::midy_generator(Natural(6), Natural(2));
    CHECK(out.value == 1);
    CHECK(out.verdict == Verdict::Unit);

    CHECK_THROWS_AS(midy::midy_generator(Natural(2), Natural(2)), midy::DomainError);
}

TEST_CASE("every prime divisor of f_n(b) has order n") {
    for (std::uint64_t n = 3; n <= 36; ++n) {
        for (std::uint64_t b = 2; b <= 6; ++b) {
            const auto out = midy::midy_generator(Natural(n), Natural(b));
            if (out.value <= 1)
                continue;
            for (const auto& fp : midy::factorize(out.value))
                CHECK(midy::multiplicative_order(Natural(b), fp.prime) == n);
            if (out.verdict == Verdict::MidyNumber)
                CHECK(midy::is_midy_number(out.value, Natural(b)));
        }
    }
}

#pragma once

#include <optional>
#include <vector>

#include "midy/arith.hpp"
#include "midy/natural.hpp"

namespace midy {

struct QResult {
    Natural q;
    bool probable_prime = false;
    std::optional<Natural> witness_i;
};

// Per-(n, base) record of all pseudoprimality flags. The pseudoprime flags
// require compositeness, so they are all false on prime n.
struct Classification {
    Natural n;
    Natural base;
    bool probable_prime = false;
    bool fermat_psp = false;
    bool strong_psp = false;
    bool midy_number = false;
    bool carmichael = false;
    std::vector<QResult> q_results;
    std::optional<Factorization> factorization;
};

/// n >= 3 odd, gcd(base, n) = 1. q_results covers q_list when given (each
/// entry must satisfy the q | p - 1 hypothesis), else all of eligible_q(n).
Classification classify(const Natural& n, const Natural& base,
                        const std::vector<Natural>& q_list = {});

}  // namespace midy

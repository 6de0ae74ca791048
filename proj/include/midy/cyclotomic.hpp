#pragma once

#include "midy/arith.hpp"
#include "midy/natural.hpp"

namespace midy {

struct GeneratorOutcome {
    enum class Verdict { Prime, MidyNumber, Unit };

    Natural value;
    Verdict verdict = Verdict::Unit;
};

/// Exact Phi_n(b) for n >= 1, b >= 2, via the Moebius product over the
/// divisors of n with a single exact division at the end.
Natural cyclotomic_eval(const Natural& n, const Natural& b);

/// Phi_n(b) mod m without materializing Phi_n(b): evaluates the coefficient
/// form of Phi_rad(n) at b^(n/rad(n)) by Horner. Coefficient vectors are
/// cached per radical (thread-safe).
Natural cyclotomic_eval_mod(const Natural& n, const Natural& b, const Natural& m);

/// gcd(n, Phi_n(b)) for n >= 3, b >= 2. Checked postcondition: the result is
/// 1 or the greatest prime divisor of n; anything else aborts loudly.
Natural gcd_n_phi(const Natural& n, const Natural& b);

/// f_n(b) = Phi_n(b) / gcd(n, Phi_n(b)) for n > 2, classified as
/// Prime / MidyNumber (composite) / Unit (value <= 1).
GeneratorOutcome midy_generator(const Natural& n, const Natural& b);

}  // namespace midy

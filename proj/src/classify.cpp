#include "midy/classify.hpp"

#include "midy/errors.hpp"
#include "midy/midy.hpp"
#include "midy/pseudo.hpp"

namespace midy {

Classification classify(const Natural& n, const Natural& base,
                        const std::vector<Natural>& q_list) {
    if (n < 3 || n % 2 == 0)
        throw DomainError("classify: n must be odd and >= 3");
    if (gcd(base % n, n) != 1)
        throw NotCoprime("classify: base not coprime to n");

    Classification cls;
    cls.n = n;
    cls.base = base % n;
    cls.probable_prime = is_prime(n);
    cls.factorization = factorize(n);

    if (!cls.probable_prime) {
        cls.fermat_psp = is_fermat_psp(n, base);
        cls.strong_psp = is_strong_psp(n, base);
        cls.midy_number = is_midy_number(n, base);
        cls.carmichael = is_carmichael(n);
    }

    const std::vector<Natural> qs = q_list.empty() ? eligible_q(n) : q_list;
    for (const auto& q : qs) {
        const QProbableResult res = is_q_probable_prime(n, base, q, true);
        cls.q_results.push_back({q, res.result, res.witness_i});
    }
    return cls;
}

}  // namespace midy

#include "oppsim/expansion_family.hpp"

#include "oppsim/good_sequence.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oppsim {

ExpansionFamily::ExpansionFamily(Kind kind, PhiFn phi, YFn y, std::int64_t min_first_digit,
                                 bool integer_phi, std::string name)
    : kind_(kind), phi_(std::move(phi)), y_(std::move(y)), min_first_digit_(min_first_digit),
      integer_phi_(integer_phi), name_(std::move(name)) {
    if (min_first_digit_ < 1)
        throw std::invalid_argument("expansion family: min_first_digit must be >= 1");
}

ExpansionFamily ExpansionFamily::engel() {
    return ExpansionFamily(Kind::Engel, nullptr, nullptr, 1, true, "engel");
}

ExpansionFamily ExpansionFamily::luroth_type() {
    return ExpansionFamily(Kind::LurothType, nullptr, nullptr, 2, true, "luroth-type");
}

ExpansionFamily ExpansionFamily::custom(PhiFn phi, YFn y, std::int64_t min_first_digit,
                                        bool integer_phi, std::string name) {
    if (!phi)
        throw std::invalid_argument("custom family: null phi");
    return ExpansionFamily(Kind::Custom, std::move(phi), std::move(y), min_first_digit,
                           integer_phi, std::move(name));
}

mpq_class ExpansionFamily::phi(int step, const mpz_class& digit) const {
    mpq_class val;
    switch (kind_) {
    case Kind::Engel:
        val = digit;
        break;
    case Kind::LurothType:
        val = mpq_class(digit * (digit - 1));
        break;
    case Kind::Custom:
    default:
        val = phi_(step, digit);
        break;
    }
    if (val <= 0)
        throw std::domain_error("phi: kernel not positive at digit " + digit.get_str());
    return val;
}

mpq_class ExpansionFamily::y(int step, std::span<const mpz_class> history) const {
    if (!y_)
        return mpq_class(0);
    mpq_class val = y_(step, history);
    if (val < 0)
        throw std::domain_error("y: negative value");
    return val;
}

mpz_class ExpansionFamily::min_next_digit(int step, const mpz_class& digit) const {
    const mpq_class p = phi(step, digit);
    mpz_class h;
    mpz_cdiv_q(h.get_mpz_t(), p.get_num().get_mpz_t(), p.get_den().get_mpz_t());
    return h;
}

bool integrality_hypothesis_holds(const ExpansionFamily& fam, const GoodSequence& seq,
                                  std::int64_t lambda_prefix, int steps) {
    for (std::int64_t j = 1; j <= lambda_prefix; ++j) {
        const double lam = seq.value_at(j);
        if (std::floor(lam) != lam)
            return false; // hypothesis only makes sense on integer grids
        const mpz_class x(static_cast<long>(lam));
        for (int step = 1; step <= steps; ++step) {
            std::vector<mpz_class> history;
            mpz_class digit(std::max<std::int64_t>(fam.min_first_digit(), 2));
            for (int k = 0; k < 3; ++k) { // a few digits along an admissible chain
                history.push_back(digit);
                const mpq_class p = fam.phi(step, digit);
                const mpq_class yv = fam.y(step, history);
                const mpq_class expr = x * p + (x - 1) * yv * p;
                if (expr.get_den() != 1)
                    return false;
                digit = fam.min_next_digit(step, digit) + 1;
            }
        }
    }
    return true;
}

} // namespace oppsim

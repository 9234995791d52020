#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include <gmpxx.h>

namespace oppsim {

class GoodSequence;

// The kernel pair (phi_n, y_n) defining the digit chain: digit h admits
// successors k >= phi_n(h), and y_n may depend on the digit history.
// Digits are arbitrary-precision integers because they grow geometrically.
class ExpansionFamily {
  public:
    enum class Kind { Engel, LurothType, Custom };
    using PhiFn = std::function<mpq_class(int step, const mpz_class& digit)>;
    using YFn = std::function<mpq_class(int step, std::span<const mpz_class> history)>;

    // phi_n(h) = h, y = 0, first digit >= 1.
    static ExpansionFamily engel();
    // phi_n(h) = h(h-1), y = 0, first digit >= 2.
    static ExpansionFamily luroth_type();
    // User kernels. `integer_phi` certifies that phi is integer-valued on
    // admissible digits (enables the exact minimal-digit convention).
    static ExpansionFamily custom(PhiFn phi, YFn y, std::int64_t min_first_digit,
                                  bool integer_phi, std::string name);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    std::int64_t min_first_digit() const { return min_first_digit_; }
    bool zero_y() const { return !y_; }
    bool integer_phi() const { return integer_phi_; }

    // Throws std::domain_error if the kernel is not positive at `digit`.
    mpq_class phi(int step, const mpz_class& digit) const;
    mpq_class y(int step, std::span<const mpz_class> history) const;

    // Smallest admissible successor of `digit` at `step`: ceil(phi).
    mpz_class min_next_digit(int step, const mpz_class& digit) const;

  private:
    ExpansionFamily(Kind kind, PhiFn phi, YFn y, std::int64_t min_first_digit, bool integer_phi,
                    std::string name);

    Kind kind_;
    PhiFn phi_; // custom only
    YFn y_;     // null means y == 0
    std::int64_t min_first_digit_;
    bool integer_phi_;
    std::string name_;
};

// Checks the discretization hypothesis x*phi_n(h) + (x-1)*y_n*phi_n(h) in Z
// for x running over value_at(1..lambda_prefix) of `seq` (which must be
// integer-valued), steps 1..steps, and a handful of admissible digits per
// step. Exact rational arithmetic; returns false on the first failure.
bool integrality_hypothesis_holds(const ExpansionFamily& fam, const GoodSequence& seq,
                                  std::int64_t lambda_prefix, int steps);

} // namespace oppsim

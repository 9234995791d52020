#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace oppsim {

// Harmonic number H_m = 1 + 1/2 + ... + 1/m.
// Exact loop for small m, asymptotic expansion beyond (truncation error is
// orders of magnitude below one ulp of the result for m >= 2048). `m` is a
// double so indices far beyond 2^53 can be queried; at those scales H is
// insensitive to the sub-integer part. m < 1 yields 0.
double harmonic(double m);

// Discretization grid for the expansion ratios: a strictly increasing
// sequence with value_at(0) = 0, value_at(j) >= 1 for j >= 1, and gaps
// bounded by gap_bound().
class GoodSequence {
  public:
    enum class Kind { Integers, ScaledIntegers, Custom };
    using Rule = std::function<double(std::int64_t)>;

    // value_at(j) = j, gap bound 1.
    static GoodSequence integers();
    // value_at(j) = scale * j for an integer scale >= 1, gap bound = scale.
    static GoodSequence scaled_integers(std::int64_t scale);
    // Arbitrary rule plus a caller-certified gap bound. The rule is trusted
    // after validate_prefix(); only affine built-ins get closed forms.
    static GoodSequence custom(Rule rule, double gap_bound, std::string name);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double gap_bound() const { return ell_; }
    bool is_affine() const { return kind_ != Kind::Custom; }
    std::int64_t scale() const; // affine only

    double value_at(std::int64_t j) const;

    // Index of the smallest element strictly greater than u:
    //   value_at(index_above(u) - 1) <= u < value_at(index_above(u)).
    // u must be finite and >= 0. For value_at(j) = j this is floor(u) + 1.
    std::int64_t index_above(double u) const;

    // Cumulative relative gap sum
    //   sum_{j=2}^{index_above(u)-1} (value_at(j) - value_at(j-1)) / value_at(j-1),
    // 0 when the range is empty. Affine sequences evaluate the closed
    // harmonic form (valid for any u, including u far beyond 2^53); custom
    // rules sum directly.
    double relative_gap_sum(double u) const;

    // Checks the defining properties on value_at(0..count): zero start,
    // values >= 1 from index 1, strict increase, gaps <= gap_bound().
    // Throws std::invalid_argument on the first violation.
    void validate_prefix(std::int64_t count) const;

  private:
    GoodSequence(Kind kind, std::int64_t scale, double ell, Rule rule, std::string name);

    Kind kind_;
    std::int64_t scale_ = 1;
    double ell_;
    Rule rule_; // custom only
    std::string name_;
};

} // namespace oppsim

#include "oppsim/sampler.hpp"

#include "oppsim/util.hpp"

#include <cmath>

namespace oppsim {

namespace {

// Tail inversion core: smallest h >= hmin with delta(phi, h+1, y) <= q,
// i.e. h = ceil(phi(1+y)/q - phi*y) - 1 clamped to hmin. Exact in rational
// arithmetic, so no local correction step is needed.
mpz_class invert_tail(const mpq_class& phi, const mpq_class& y, const mpz_class& hmin, double q) {
    if (!(q > 0.0))
        throw std::domain_error("invert_tail: inverse cdf not positive");
    const mpq_class qq(q); // doubles are exact rationals
    const mpq_class target = phi * (1 + y) / qq - phi * y;
    mpz_class h;
    mpz_cdiv_q(h.get_mpz_t(), target.get_num().get_mpz_t(), target.get_den().get_mpz_t());
    h -= 1;
    if (h < hmin)
        return hmin;
    return h;
}

} // namespace

mpz_class next_digit(const mpz_class& b, int step, const ExpansionFamily& fam,
                     const DistributionSpec& dist, double u, std::span<const mpz_class> history) {
    if (!(u > 0.0) || !(u < 1.0))
        throw resample_needed();
    const mpq_class phi = fam.phi(step, b);
    const mpz_class single[] = {b};
    const std::span<const mpz_class> hist = history.empty()
                                                ? std::span<const mpz_class>(single, 1)
                                                : history;
    const mpq_class y = fam.y(step, hist);
    return invert_tail(phi, y, fam.min_next_digit(step, b), dist.cdf_inverse(u));
}

mpz_class first_digit(const ExpansionFamily& fam, const DistributionSpec& dist, double u) {
    if (!(u > 0.0) || !(u < 1.0))
        throw resample_needed();
    const mpq_class phi(static_cast<long>(fam.min_first_digit()));
    const mpz_class hmin(static_cast<long>(fam.min_first_digit()));
    return invert_tail(phi, mpq_class(0), hmin, dist.cdf_inverse(u));
}

mpq_class chain_ratio(const ExpansionFamily& fam, std::span<const mpz_class> digits, int j) {
    if (j < 1 || static_cast<std::size_t>(j) + 1 > digits.size())
        throw std::invalid_argument("chain_ratio: step out of range");
    const mpq_class phi = fam.phi(j, digits[j - 1]);
    const mpq_class y = fam.y(j, digits.subspan(0, static_cast<std::size_t>(j)));
    return (digits[j] + phi * y) / (phi * (1 + y));
}

double grid_value_above(const GoodSequence& seq, const mpq_class& r) {
    if (seq.is_affine()) {
        const mpz_class c(static_cast<long>(seq.scale()));
        mpz_class j;
        mpz_fdiv_q(j.get_mpz_t(), r.get_num().get_mpz_t(), mpz_class(r.get_den() * c).get_mpz_t());
        j += 1;
        return mpz_class(j * c).get_d();
    }
    const double rd = r.get_d();
    std::int64_t j = seq.index_above(rd);
    // rd is rounded; nudge with exact comparisons so that lambda_{j-1} <= r < lambda_j.
    while (j > 1 && mpq_class(seq.value_at(j - 1)) > r)
        --j;
    while (mpq_class(seq.value_at(j)) <= r)
        ++j;
    return seq.value_at(j);
}

ChainPath sample_chain(const ExpansionFamily& fam, const DistributionSpec& dist,
                       const GoodSequence& seq, std::int64_t n, RngStream& rng, std::int64_t cap) {
    if (n < 1)
        throw std::invalid_argument("sample_chain: n must be >= 1");
    if (n > cap)
        throw config_error("sample_chain: chain length " + std::to_string(n) +
                           " exceeds cap " + std::to_string(cap));
    ChainPath path;
    path.digits.reserve(static_cast<std::size_t>(n) + 1);
    path.ratios.reserve(static_cast<std::size_t>(n));
    path.x.reserve(static_cast<std::size_t>(n));

    path.digits.push_back(first_digit(fam, dist, rng.next_unit()));
    for (int j = 1; j <= n; ++j) {
        const std::span<const mpz_class> hist(path.digits.data(), static_cast<std::size_t>(j));
        path.digits.push_back(next_digit(path.digits.back(), j, fam, dist, rng.next_unit(), hist));
        const mpq_class r = chain_ratio(fam, path.digits, j);
        path.ratios.push_back(r.get_d());
        path.x.push_back(grid_value_above(seq, r));
    }
    return path;
}

double sample_one_x(const DistributionSpec& dist, const GoodSequence& seq, double u) {
    if (!(u > 0.0) || !(u < 1.0))
        throw resample_needed();
    const double v = 1.0 / dist.cdf_inverse(u);
    if (seq.is_affine()) {
        const double c = static_cast<double>(seq.scale());
        return c * (std::floor(v / c) + 1.0);
    }
    return seq.value_at(seq.index_above(v));
}

void sample_iid_x_into(std::span<double> out, const DistributionSpec& dist,
                       const GoodSequence& seq, RngStream& rng) {
    if (seq.is_affine() && dist.kind() == DistributionSpec::Kind::Identity) {
        const double c = static_cast<double>(seq.scale());
        for (double& slot : out) {
            const double v = 1.0 / rng.next_unit();
            slot = c * (std::floor(v / c) + 1.0);
        }
        return;
    }
    if (seq.is_affine() && dist.kind() == DistributionSpec::Kind::Quadratic) {
        const double c = static_cast<double>(seq.scale());
        for (double& slot : out) {
            const double u = rng.next_unit();
            const double v = 1.0 / (4.0 * u / (1.0 + std::sqrt(1.0 + 8.0 * u)));
            slot = c * (std::floor(v / c) + 1.0);
        }
        return;
    }
    for (double& slot : out)
        slot = sample_one_x(dist, seq, rng.next_unit());
}

std::vector<double> sample_iid_x(const DistributionSpec& dist, const GoodSequence& seq,
                                 std::int64_t n, RngStream& rng) {
    if (n < 1)
        throw std::invalid_argument("sample_iid_x: n must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    sample_iid_x_into(out, dist, seq, rng);
    return out;
}

} // namespace oppsim

#include "bsa/restriction.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "bsa/error.hpp"
#include "bsa/kernels.hpp"
#include "bsa/partition.hpp"

namespace bsa {

Restriction::Restriction(int n, std::vector<Slot> pattern) : pattern_(std::move(pattern)) {
    if (n < 0 || n > kPolynomialCap) throw InputError("restriction length must lie in [0, 64]");
    if (static_cast<int>(pattern_.size()) != n) throw InputError("restriction pattern length must equal n");
}

Restriction::Restriction(int n) : Restriction(n, std::vector<Slot>(static_cast<std::size_t>(std::max(n, 0)), Slot::free)) {}

int Restriction::free_count() const noexcept { return std::popcount(free_mask()); }

std::uint64_t Restriction::free_mask() const noexcept {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < pattern_.size(); ++i) {
        if (pattern_[i] == Slot::free) m |= std::uint64_t{1} << i;
    }
    return m;
}

std::uint64_t Restriction::fixed_bits() const noexcept {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < pattern_.size(); ++i) {
        if (pattern_[i] == Slot::minus) m |= std::uint64_t{1} << i;
    }
    return m;
}

Point Restriction::complete(Point y) const noexcept {
    Point x = fixed_bits();
    int j = 0;
    for (std::size_t i = 0; i < pattern_.size(); ++i) {
        if (pattern_[i] != Slot::free) continue;
        if ((y >> j) & 1U) x |= Point{1} << i;
        ++j;
    }
    return x;
}

Restriction sample_restriction(int n, double r, Stream& rng) {
    if (!(r > 0.0 && r < 1.0)) throw InputError("restriction survival rate r must lie in (0, 1)");
    if (n < 0 || n > kPolynomialCap) throw InputError("restriction length must lie in [0, 64]");
    std::vector<Slot> pattern(static_cast<std::size_t>(n));
    for (auto& slot : pattern) {
        if (rng.uniform() < r) {
            slot = Slot::free;
        } else {
            slot = (rng() & 1U) ? Slot::minus : Slot::plus;
        }
    }
    return Restriction(n, std::move(pattern));
}

Restriction sample_restriction(int n, double r, std::uint64_t seed) {
    Stream rng(seed, 0);
    return sample_restriction(n, r, rng);
}

TruthTable restrict_table(const TruthTable& f, const Restriction& rho) {
    if (rho.n() != f.n()) throw InputError("restriction and truth table disagree on n");
    return TruthTable::from_predicate(rho.free_count(), [&](Point y) { return f.bit(rho.complete(y)); });
}

Closeness closeness_to_constant(const TruthTable& f) {
    const std::uint64_t minus = f.count_minus();
    const std::uint64_t plus = f.size() - minus;
    Closeness c;
    if (minus <= plus) {
        c.best_sign = 1;
        c.disagreements = minus;
    } else {
        c.best_sign = -1;
        c.disagreements = plus;
    }
    c.delta_star = std::ldexp(static_cast<double>(c.disagreements), -f.n());
    return c;
}

double FailureEstimate::rejection_rate() const noexcept {
    const std::uint64_t total = accepted + rejected;
    return total == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(total);
}

FailureEstimate restriction_failure_prob(const SparsePolynomial& p, double r, double delta, std::uint64_t trials,
                                         std::uint64_t seed) {
    if (!(r > 0.0 && r < 1.0)) throw InputError("restriction survival rate r must lie in (0, 1)");
    if (!(delta >= 0.0 && delta < 1.0)) throw InputError("closeness parameter delta must lie in [0, 1)");
    if (trials < 1) throw InputError("failure estimate needs at least one trial");

    FailureEstimate est;
    est.outside_regime = r > 1.0 / 16 || delta <= 0.0 || delta > 1.0 / 16;

    std::uint64_t failures = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    const auto total = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : failures, accepted, rejected)
    for (std::int64_t t = 0; t < total; ++t) {
        Stream rng(seed, static_cast<std::uint64_t>(t));
        const Restriction rho = sample_restriction(p.n(), r, rng);
        if (rho.free_count() > kExactCap) {
            ++rejected;
            continue;
        }
        ++accepted;
        const auto restricted = kernels::serial::sign_table(restrict_poly(p, rho));
        if (closeness_to_constant(restricted.table).delta_star > delta) ++failures;
    }

    est.accepted = accepted;
    est.rejected = rejected;
    if (accepted > 0) {
        const double n = static_cast<double>(accepted);
        est.value = static_cast<double>(failures) / n;
        est.std_error = std::sqrt(est.value * (1.0 - est.value) / n);
    }
    return est;
}

TailReport tail_coupling_check(const SensitivityProfile& profile, int m) {
    if (m < 1 || m > profile.n) {
        throw InputError("tail threshold m must lie in [1, n], got " + std::to_string(m));
    }
    TailReport rep;
    rep.m = m;

    const Rational keep(m - 1, m);
    const Rational points(BigInt(1) << profile.n);
    Rational lb = 0;
    Rational pow_keep = 1;
    for (int s = 0; s <= profile.n; ++s) {
        if (s >= m) lb += Rational(BigInt(profile.counts[static_cast<std::size_t>(s)])) * (1 - pow_keep);
        pow_keep *= keep;
    }
    lb /= points;
    const Rational p_e = Rational(BigInt(profile.tail_count(m))) / points;
    Rational keep_m = 1;
    for (int s = 0; s < m; ++s) keep_m *= keep;
    const Rational floor = 1 - keep_m;

    rep.p_E = static_cast<double>(p_e);
    rep.coupling_lb = static_cast<double>(lb);
    rep.bound_ratio = p_e > 0 ? static_cast<double>(lb / p_e) : 0.0;
    rep.floor_factor = static_cast<double>(floor);
    rep.floor_certified = lb >= floor * p_e;
    // (1 - 1/m)^m <= 1/e; the slack is at least 1/(2em) - O(1/m^2), far above 60-digit rounding.
    rep.e_bound_certified = HighFloat(keep_m) <= exp(HighFloat(-1));
    return rep;
}

TailReport tail_coupling_check(const TruthTable& f, int m) {
    if (m < 1 || m > f.n()) throw InputError("tail threshold m must lie in [1, n], got " + std::to_string(m));
    return tail_coupling_check(sensitivity_profile(f), m);
}

ClosenessCensus closeness_census(int ell) {
    if (ell < 0) throw InputError("ell must be nonnegative");
    if (ell > 4) throw CapacityError("exhaustive check is limited to ell <= 4 (65536 functions)");

    const std::uint64_t points = std::uint64_t{1} << ell;
    const std::uint64_t functions = std::uint64_t{1} << points;
    const auto total = static_cast<std::int64_t>(functions);
    const auto factor = static_cast<std::uint64_t>(ell + 1);

    // Best ratio as an exact fraction num/den; ties go to the smaller function index.
    struct Best {
        std::uint64_t num = 0;
        std::uint64_t den = 1;
        std::uint64_t index = 0;
    };
    auto better = [](const Best& a, const Best& b) {
        const auto lhs = static_cast<__uint128_t>(a.num) * b.den;
        const auto rhs = static_cast<__uint128_t>(b.num) * a.den;
        return lhs > rhs || (lhs == rhs && a.index < b.index);
    };

    Best best;
    std::uint64_t violations = 0;
#pragma omp parallel
    {
        Best local;
        std::uint64_t local_violations = 0;
#pragma omp for schedule(static)
        for (std::int64_t gi = 0; gi < total; ++gi) {
            const auto g = static_cast<std::uint64_t>(gi);
            std::uint64_t sensitive = 0;
            for (Point y = 0; y < points; ++y) {
                const bool gy = (g >> y) & 1U;
                for (int j = 0; j < ell; ++j) {
                    if (((g >> (y ^ (Point{1} << j))) & 1U) != gy) {
                        ++sensitive;
                        break;
                    }
                }
            }
            const auto minus = static_cast<std::uint64_t>(std::popcount(g));
            const std::uint64_t closest = std::min(minus, points - minus);
            // Pr[s >= 1] <= (ell+1) delta with both sides over 2^ell.
            if (sensitive > factor * closest) ++local_violations;
            if (closest > 0) {
                const Best cand{sensitive, factor * closest, g};
                if (better(cand, local)) local = cand;
            }
        }
#pragma omp critical(bsa_closeness_merge)
        {
            violations += local_violations;
            if (better(local, best)) best = local;
        }
    }

    ClosenessCensus rep;
    rep.ell = ell;
    rep.functions_checked = functions;
    rep.violations = violations;
    rep.max_ratio = static_cast<double>(best.num) / static_cast<double>(best.den);
    rep.witness = TruthTable::from_words(ell, {best.index});
    return rep;
}

} // namespace bsa

#pragma once

#include <cstdint>
#include <vector>

#include "bsa/core.hpp"
#include "bsa/polynomial.hpp"
#include "bsa/random.hpp"
#include "bsa/truth_table.hpp"

namespace bsa {

enum class Slot : std::int8_t { minus = -1, free = 0, plus = 1 };

/// A partial assignment rho in {-1, +1, *}^n.
class Restriction {
public:
    Restriction(int n, std::vector<Slot> pattern);
    /// All coordinates free.
    explicit Restriction(int n);

    int n() const noexcept { return static_cast<int>(pattern_.size()); }
    const std::vector<Slot>& pattern() const noexcept { return pattern_; }
    Slot operator[](int i) const noexcept { return pattern_[static_cast<std::size_t>(i)]; }

    int free_count() const noexcept;
    /// Bitmask of free coordinates.
    std::uint64_t free_mask() const noexcept;
    /// Point bits of the fixed coordinates (bit set for coordinates fixed to -1).
    std::uint64_t fixed_bits() const noexcept;
    /// The full point obtained by filling the free coordinates, in order, with the bits of y.
    Point complete(Point y) const noexcept;

    friend bool operator==(const Restriction&, const Restriction&) = default;

private:
    std::vector<Slot> pattern_;
};

/// R_r: every coordinate independently free with probability r, otherwise a uniform sign.
Restriction sample_restriction(int n, double r, Stream& rng);
Restriction sample_restriction(int n, double r, std::uint64_t seed);

/// f_rho on the free coordinates of rho, in increasing coordinate order. A fully fixed rho
/// yields the 0-variable table holding f at the completed point.
TruthTable restrict_table(const TruthTable& f, const Restriction& rho);

struct Closeness {
    /// min over a of Pr[f != a].
    double delta_star = 0.0;
    /// The minimising constant; +1 on ties.
    int best_sign = 1;
    /// #{x : f(x) != best_sign}.
    std::uint64_t disagreements = 0;
};

Closeness closeness_to_constant(const TruthTable& f);

struct FailureEstimate {
    double value = 0.0;
    double std_error = 0.0;
    /// Samples kept (free count within kExactCap).
    std::uint64_t accepted = 0;
    /// Samples discarded because too many coordinates stayed free.
    std::uint64_t rejected = 0;
    /// r or delta outside (0, 1/16], where the failure bound is claimed.
    bool outside_regime = false;

    double rejection_rate() const noexcept;
};

/// Estimates Pr_{rho ~ R_r}[sgn(p)_rho is not delta-close to a constant].
FailureEstimate restriction_failure_prob(const SparsePolynomial& p, double r, double delta,
                                         std::uint64_t trials, std::uint64_t seed);

/// Coupling quantities for the tail bound P[s_f >= m] <~ 1/sqrt(m).
struct TailReport {
    int m = 0;
    /// Pr[s_f(x) >= m].
    double p_E = 0.0;
    /// E_x[1{s_f(x) >= m} (1 - (1 - 1/m)^{s_f(x)})]: exact lower bound on P[B].
    double coupling_lb = 0.0;
    /// coupling_lb / p_E, or 0 when p_E = 0.
    double bound_ratio = 0.0;
    /// 1 - (1 - 1/m)^m.
    double floor_factor = 0.0;
    /// coupling_lb >= floor_factor * p_E, decided in exact rational arithmetic.
    bool floor_certified = false;
    /// floor_factor >= 1 - 1/e.
    bool e_bound_certified = false;
};

/// Throws InputError unless 1 <= m <= n.
TailReport tail_coupling_check(const SensitivityProfile& profile, int m);
TailReport tail_coupling_check(const TruthTable& f, int m);

struct ClosenessCensus {
    int ell = 0;
    std::uint64_t functions_checked = 0;
    std::uint64_t violations = 0;
    /// max over nonconstant-closeness g of Pr[s_g >= 1] / ((ell+1) delta_star(g)).
    double max_ratio = 0.0;
    /// Truth table of the first function attaining max_ratio.
    TruthTable witness{0};
};

/// Checks Pr[s_g >= 1] <= (ell+1) delta_star(g) for every g on ell <= 4 variables.
ClosenessCensus closeness_census(int ell);

} // namespace bsa

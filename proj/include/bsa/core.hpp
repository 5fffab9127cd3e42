#pragma once

#include <cstdint>
#include <vector>

#include "bsa/truth_table.hpp"

namespace bsa {

/// Histogram of s_f(x) = #{i : f(x) != f(x^i)} over the whole cube, plus the number of
/// sensitive points per coordinate. Everything else in this header is a sum over it.
struct SensitivityProfile {
    int n = 0;
    /// counts[m] = #{x : s_f(x) = m}, length n+1.
    std::vector<std::uint64_t> counts;
    /// coordinate_counts[i] = #{x : f(x) != f(x^i)}, length n.
    std::vector<std::uint64_t> coordinate_counts;

    std::uint64_t points() const noexcept { return std::uint64_t{1} << n; }
    /// Sum of s_f over the cube (twice the number of boundary edges).
    std::uint64_t total_sensitivity() const noexcept;
    /// #{x : s_f(x) >= m}.
    std::uint64_t tail_count(int m) const noexcept;
    /// True when s_f takes a single value on the whole cube.
    bool is_constant() const noexcept;

    friend bool operator==(const SensitivityProfile&, const SensitivityProfile&) = default;
};

struct Influences {
    double total = 0.0;
    std::vector<double> per_coordinate;
};

/// Fourier-Walsh coefficients indexed by subset bitmask: coefficients[S] = E[f(x) chi_S(x)].
struct FourierSpectrum {
    int n = 0;
    std::vector<double> coefficients;

    double parseval_sum() const;
};

struct NoiseSensitivity {
    double delta = 0.0;
    /// rho = e^{-t} = 1 - 2 delta.
    double rho = 0.0;
    double t = 0.0;
    /// sum_S (1 - rho^|S|) fhat(S)^2 / 2, which is (1 - sum_S rho^|S| fhat(S)^2) / 2 for Boolean f.
    double spectral = 0.0;
    /// E|f - P_t f| / 2, with P_t f synthesised pointwise from the damped spectrum.
    double pointwise = 0.0;
};

int sensitivity(const TruthTable& f, Point x);

SensitivityProfile sensitivity_profile(const TruthTable& f);

/// Boolean surface area (Talagrand boundary) E sqrt(s_f(x)).
double surface_area(const SensitivityProfile& profile);
double surface_area(const TruthTable& f);

Influences total_influence(const SensitivityProfile& profile);
Influences total_influence(const TruthTable& f);

/// E[s_f(x)^alpha] for 0 < alpha <= 1. alpha = 1/2 reproduces surface_area() bit for bit and alpha = 1
/// reproduces the total influence.
double fractional_moment(const SensitivityProfile& profile, double alpha);
double fractional_moment(const TruthTable& f, double alpha);

/// E sqrt(X) = sum_{m>=1} (sqrt(m) - sqrt(m-1)) P[X >= m] applied to X = s_f(x).
double bsa_via_tails(const SensitivityProfile& profile);
double bsa_via_tails(const TruthTable& f);

FourierSpectrum fourier_transform(const TruthTable& f);
/// Synthesis: g(x) = sum_S coefficients[S] chi_S(x), one real per point.
std::vector<double> inverse_fourier_transform(const FourierSpectrum& spectrum);

/// Noise sensitivity with parameter 0 < delta < 1/2, computed by both routes.
NoiseSensitivity noise_sensitivity(const FourierSpectrum& spectrum, double delta);
NoiseSensitivity noise_sensitivity(const TruthTable& f, double delta);

/// 32 (log(e n))^{2K+1}: the polylogarithmic ceiling on BSA with a chosen value of the
/// (non-explicit) degree constant K.
double bsa_ceiling(int n, int k_constant);

} // namespace bsa

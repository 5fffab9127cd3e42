#include "bsa/core.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "bsa/error.hpp"
#include "bsa/kernels.hpp"

namespace bsa {

namespace {

// sum_m counts[m] * weight[m] / 2^n, walked in increasing m.
double weighted_mean(const SensitivityProfile& profile, const std::vector<double>& weight) {
    double acc = 0.0;
    for (std::size_t m = 0; m < profile.counts.size(); ++m) {
        acc += static_cast<double>(profile.counts[m]) * weight[m];
    }
    return std::ldexp(acc, -profile.n);
}

std::vector<double> sqrt_table(int n) {
    std::vector<double> roots(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) roots[static_cast<std::size_t>(m)] = std::sqrt(static_cast<double>(m));
    return roots;
}

} // namespace

std::uint64_t SensitivityProfile::total_sensitivity() const noexcept {
    std::uint64_t acc = 0;
    for (std::size_t m = 0; m < counts.size(); ++m) acc += counts[m] * m;
    return acc;
}

std::uint64_t SensitivityProfile::tail_count(int m) const noexcept {
    std::uint64_t acc = 0;
    for (std::size_t s = static_cast<std::size_t>(std::max(m, 0)); s < counts.size(); ++s) acc += counts[s];
    return acc;
}

bool SensitivityProfile::is_constant() const noexcept {
    int support = 0;
    for (auto c : counts) support += c > 0 ? 1 : 0;
    return support <= 1;
}

double FourierSpectrum::parseval_sum() const {
    std::vector<double> squares(coefficients.size());
    for (std::size_t s = 0; s < coefficients.size(); ++s) squares[s] = coefficients[s] * coefficients[s];
    return kernels::parallel::pairwise_sum(squares);
}

int sensitivity(const TruthTable& f, Point x) {
    const bool fx = f.at(x) == -1;
    int s = 0;
    for (int i = 0; i < f.n(); ++i) s += (f.bit(x ^ (Point{1} << i)) != fx) ? 1 : 0;
    return s;
}

SensitivityProfile sensitivity_profile(const TruthTable& f) { return kernels::parallel::sensitivity_profile(f); }

double surface_area(const SensitivityProfile& profile) { return fractional_moment(profile, 0.5); }

double surface_area(const TruthTable& f) { return surface_area(sensitivity_profile(f)); }

Influences total_influence(const SensitivityProfile& profile) {
    Influences inf;
    inf.per_coordinate.reserve(profile.coordinate_counts.size());
    for (auto c : profile.coordinate_counts) inf.per_coordinate.push_back(std::ldexp(static_cast<double>(c), -profile.n));
    inf.total = std::ldexp(static_cast<double>(profile.total_sensitivity()), -profile.n);
    return inf;
}

Influences total_influence(const TruthTable& f) { return total_influence(sensitivity_profile(f)); }

double fractional_moment(const SensitivityProfile& profile, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("fractional moment order must lie in (0, 1]");
    if (alpha == 0.5) return weighted_mean(profile, sqrt_table(profile.n));
    std::vector<double> weight(profile.counts.size());
    for (std::size_t m = 0; m < weight.size(); ++m) {
        weight[m] = alpha == 1.0 ? static_cast<double>(m) : std::pow(static_cast<double>(m), alpha);
    }
    return weighted_mean(profile, weight);
}

double fractional_moment(const TruthTable& f, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("fractional moment order must lie in (0, 1]");
    return fractional_moment(sensitivity_profile(f), alpha);
}

double bsa_via_tails(const SensitivityProfile& profile) {
    const auto roots = sqrt_table(profile.n);
    double acc = 0.0;
    for (int m = 1; m <= profile.n; ++m) {
        const auto um = static_cast<std::size_t>(m);
        acc += (roots[um] - roots[um - 1]) * static_cast<double>(profile.tail_count(m));
    }
    return std::ldexp(acc, -profile.n);
}

double bsa_via_tails(const TruthTable& f) { return bsa_via_tails(sensitivity_profile(f)); }

FourierSpectrum fourier_transform(const TruthTable& f) {
    FourierSpectrum spec;
    spec.n = f.n();
    spec.coefficients.resize(f.size());
    for (Point x = 0; x < f.size(); ++x) spec.coefficients[x] = f.value(x);
    kernels::parallel::walsh_hadamard(spec.coefficients);
    for (auto& c : spec.coefficients) c = std::ldexp(c, -f.n());
    return spec;
}

std::vector<double> inverse_fourier_transform(const FourierSpectrum& spectrum) {
    std::vector<double> values = spectrum.coefficients;
    kernels::parallel::walsh_hadamard(values);
    return values;
}

NoiseSensitivity noise_sensitivity(const FourierSpectrum& spectrum, double delta) {
    if (!(delta > 0.0 && delta < 0.5)) throw InputError("noise rate delta must lie in (0, 1/2)");
    NoiseSensitivity ns;
    ns.delta = delta;
    ns.rho = 1.0 - 2.0 * delta;
    ns.t = -std::log(ns.rho);

    const int n = spectrum.n;
    std::vector<double> rho_pow(static_cast<std::size_t>(n) + 1, 1.0);
    for (int k = 1; k <= n; ++k) rho_pow[static_cast<std::size_t>(k)] = rho_pow[static_cast<std::size_t>(k - 1)] * ns.rho;
    // (1 - rho^k) / 2 = delta (1 + rho + ... + rho^{k-1}): no cancellation, and exactly delta at k = 1.
    std::vector<double> weight(static_cast<std::size_t>(n) + 1, 0.0);
    double geometric = 0.0;
    for (int k = 1; k <= n; ++k) {
        geometric += rho_pow[static_cast<std::size_t>(k - 1)];
        weight[static_cast<std::size_t>(k)] = delta * geometric;
    }

    const auto& c = spectrum.coefficients;
    std::vector<double> damped(c.size());
    std::vector<double> terms(c.size());
    for (std::size_t s = 0; s < c.size(); ++s) {
        const auto level = static_cast<std::size_t>(std::popcount(s));
        damped[s] = rho_pow[level] * c[s];
        terms[s] = weight[level] * c[s] * c[s];
    }
    ns.spectral = kernels::parallel::pairwise_sum(terms);

    // f itself is the undamped synthesis; P_t f the damped one.
    const auto f_values = inverse_fourier_transform(spectrum);
    kernels::parallel::walsh_hadamard(damped);
    for (std::size_t x = 0; x < damped.size(); ++x) terms[x] = std::abs(f_values[x] - damped[x]);
    ns.pointwise = 0.5 * std::ldexp(kernels::parallel::pairwise_sum(terms), -n);
    return ns;
}

NoiseSensitivity noise_sensitivity(const TruthTable& f, double delta) {
    if (!(delta > 0.0 && delta < 0.5)) throw InputError("noise rate delta must lie in (0, 1/2)");
    return noise_sensitivity(fourier_transform(f), delta);
}

double bsa_ceiling(int n, int k_constant) {
    if (n < 1) throw InputError("ceiling needs n >= 1");
    return 32.0 * std::pow(std::log(std::numbers::e * n), 2 * k_constant + 1);
}

} // namespace bsa

#include "bsa/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>

#include "bsa/error.hpp"
#include "bsa/kernels.hpp"
#include "bsa/random.hpp"
#include "bsa/restriction.hpp"

namespace bsa {

namespace {

void check_poly_n(int n) {
    if (n < 0) throw InputError("variable count must be nonnegative");
    if (n > kPolynomialCap) {
        throw CapacityError("polynomials are limited to n <= " + std::to_string(kPolynomialCap) + ", got " +
                            std::to_string(n));
    }
}

std::uint64_t all_mask(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

// chi_S(x) for the point encoding (bit set = -1).
inline double character(std::uint64_t subset, Point x) { return (std::popcount(subset & x) & 1) ? -1.0 : 1.0; }

double alpha_sample(const SparsePolynomial& p, Point a, Point b) {
    const double pa = eval_poly(p, a);
    if (pa == 0.0) return 1.0;
    const double d = directional_derivative(p, b, a);
    return std::min(1.0, (d * d) / (pa * pa));
}

} // namespace

SparsePolynomial::SparsePolynomial(int n) : n_(n) { check_poly_n(n); }

SparsePolynomial::SparsePolynomial(int n, Terms terms) : n_(n) {
    check_poly_n(n);
    const std::uint64_t mask = all_mask(n);
    for (const auto& [subset, c] : terms) {
        if ((subset & ~mask) != 0) throw InputError("term uses a variable outside [n]");
        if (!std::isfinite(c)) throw InputError("polynomial coefficients must be finite");
        if (c != 0.0) terms_.emplace(subset, c);
    }
}

int SparsePolynomial::degree() const noexcept {
    int d = 0;
    for (const auto& [subset, c] : terms_) d = std::max(d, std::popcount(subset));
    return d;
}

double SparsePolynomial::coefficient(std::uint64_t subset) const noexcept {
    const auto it = terms_.find(subset);
    return it == terms_.end() ? 0.0 : it->second;
}

SparsePolynomial SparsePolynomial::from_spectrum(const FourierSpectrum& spectrum, double tolerance) {
    Terms terms;
    for (std::size_t s = 0; s < spectrum.coefficients.size(); ++s) {
        const double c = spectrum.coefficients[s];
        if (std::abs(c) > tolerance) terms.emplace(s, c);
    }
    return SparsePolynomial(spectrum.n, std::move(terms));
}

double eval_poly(const SparsePolynomial& p, Point x) {
    double acc = 0.0;
    for (const auto& [subset, c] : p.terms()) acc += (std::popcount(subset & x) & 1) ? -c : c;
    return acc;
}

SignTable sign_table(const SparsePolynomial& p) {
    auto result = kernels::parallel::sign_table(p);
    return {std::move(result.table), result.zero_hits};
}

SparsePolynomial restrict_poly(const SparsePolynomial& p, const Restriction& rho) {
    if (rho.n() != p.n()) throw InputError("restriction and polynomial disagree on n");
    const std::uint64_t free = rho.free_mask();
    const std::uint64_t minus = rho.fixed_bits();

    SparsePolynomial::Terms collected;
    for (const auto& [subset, c] : p.terms()) {
        const double sign = (std::popcount(subset & ~free & minus) & 1) ? -1.0 : 1.0;
        // Compress the free part of the subset onto consecutive indices.
        std::uint64_t packed = 0;
        int out = 0;
        for (std::uint64_t rest = free; rest != 0; rest &= rest - 1, ++out) {
            const std::uint64_t low = rest & (~rest + 1);
            if (subset & low) packed |= std::uint64_t{1} << out;
        }
        collected[packed] += sign * c;
    }
    return SparsePolynomial(rho.free_count(), std::move(collected));
}

PolyStats poly_stats(const SparsePolynomial& p) {
    if (p.is_zero()) throw DegenerateError("statistics of the zero polynomial are undefined");
    PolyStats st;
    st.influences.assign(static_cast<std::size_t>(p.n()), 0.0);
    for (const auto& [subset, c] : p.terms()) {
        if (subset == 0) continue;
        const double sq = c * c;
        st.variance += sq;
        for (std::uint64_t rest = subset; rest != 0; rest &= rest - 1) {
            st.influences[static_cast<std::size_t>(std::countr_zero(rest))] += sq;
        }
    }
    if (st.variance > 0.0) {
        st.regular_tau = *std::max_element(st.influences.begin(), st.influences.end()) / st.variance;
    }
    return st;
}

double directional_derivative(const SparsePolynomial& p, Point v, Point x) {
    // D_j chi_S = chi_S when j in S, else 0; so D_v chi_S = chi_S * sum_{j in S} v_j.
    double acc = 0.0;
    for (const auto& [subset, c] : p.terms()) {
        const int size = std::popcount(subset);
        if (size == 0) continue;
        const int v_sum = size - 2 * std::popcount(subset & v);
        acc += c * character(subset, x) * v_sum;
    }
    return acc;
}

Estimate alpha_estimate(const SparsePolynomial& p, std::uint64_t trials, std::uint64_t seed) {
    if (p.is_zero()) throw DegenerateError("alpha is undefined for the zero polynomial");
    if (trials < 1) throw InputError("alpha estimate needs at least one trial");
    const std::uint64_t mask = all_mask(p.n());
    std::vector<double> values(trials);
    const auto total = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < total; ++t) {
        Stream rng(seed, static_cast<std::uint64_t>(t));
        const Point a = rng() & mask;
        const Point b = rng() & mask;
        values[static_cast<std::size_t>(t)] = alpha_sample(p, a, b);
    }
    return sample_estimate(values);
}

Estimate sample_estimate(const std::vector<double>& values) {
    if (values.empty()) return {};
    const double count = static_cast<double>(values.size());
    const double mean = kernels::parallel::pairwise_sum(values) / count;
    Estimate est{mean, 0.0};
    if (values.size() > 1) {
        std::vector<double> deviations(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) deviations[i] = (values[i] - mean) * (values[i] - mean);
        est.std_error = std::sqrt(kernels::parallel::pairwise_sum(deviations) / (count - 1) / count);
    }
    return est;
}

double alpha_exact(const SparsePolynomial& p) {
    if (p.is_zero()) throw DegenerateError("alpha is undefined for the zero polynomial");
    if (p.n() > 12) throw CapacityError("exact alpha enumerates 4^n pairs; n must be <= 12");
    const Point points = Point{1} << p.n();
    std::vector<double> values(points * points);
    for (Point a = 0; a < points; ++a) {
        for (Point b = 0; b < points; ++b) values[a * points + b] = alpha_sample(p, a, b);
    }
    return kernels::serial::pairwise_sum(values) / static_cast<double>(values.size());
}

GeneratorKind parse_generator_kind(const std::string& name) {
    if (name == "majority" || name == "maj") return GeneratorKind::majority;
    if (name == "harmonic" || name == "harmonic-weighted" || name == "harm") return GeneratorKind::harmonic;
    if (name == "parity" || name == "parity-on-subset" || name == "par") return GeneratorKind::parity;
    if (name == "random" || name == "random-degree-d" || name == "rand") return GeneratorKind::random_dense;
    if (name == "sparse" || name == "random-sparse-degree-d") return GeneratorKind::random_sparse;
    throw InputError("unknown generator kind '" + name + "'");
}

std::string to_string(GeneratorKind kind) {
    switch (kind) {
    case GeneratorKind::majority: return "majority";
    case GeneratorKind::harmonic: return "harmonic-weighted";
    case GeneratorKind::parity: return "parity-on-subset";
    case GeneratorKind::random_dense: return "random-degree-d";
    case GeneratorKind::random_sparse: return "random-sparse-degree-d";
    }
    return "unknown";
}

SparsePolynomial generate(const GeneratorSpec& spec) {
    const int n = spec.n;
    if (n < 1) throw InputError("generators need n >= 1");
    check_poly_n(n);
    SparsePolynomial::Terms terms;

    switch (spec.kind) {
    case GeneratorKind::majority:
        for (int i = 0; i < n; ++i) terms.emplace(std::uint64_t{1} << i, 1.0);
        break;
    case GeneratorKind::harmonic:
        for (int i = 0; i < n; ++i) terms.emplace(std::uint64_t{1} << i, 1.0 / std::sqrt(static_cast<double>(i + 1)));
        break;
    case GeneratorKind::parity: {
        std::uint64_t mask = 0;
        for (int v : spec.subset) {
            if (v < 0 || v >= n) throw InputError("parity variable out of range");
            const std::uint64_t bit = std::uint64_t{1} << v;
            if (mask & bit) throw InputError("duplicate variable in parity subset");
            mask |= bit;
        }
        terms.emplace(mask, 1.0);
        break;
    }
    case GeneratorKind::random_dense: {
        if (spec.degree < 0 || spec.degree > n) throw InputError("degree must lie in [0, n]");
        double count = 0.0;
        for (int k = 0; k <= spec.degree; ++k) {
            double c = 1.0;
            for (int j = 0; j < k; ++j) c = c * (n - j) / (j + 1);
            count += c;
        }
        if (count > static_cast<double>(1 << 22)) throw CapacityError("dense random polynomial has too many terms");
        Stream rng(spec.seed, 0);
        // Subsets by size, each size in lexicographic order of its index list.
        for (int k = 0; k <= spec.degree; ++k) {
            std::vector<int> idx(static_cast<std::size_t>(k));
            for (int j = 0; j < k; ++j) idx[static_cast<std::size_t>(j)] = j;
            while (true) {
                std::uint64_t mask = 0;
                for (int v : idx) mask |= std::uint64_t{1} << v;
                terms.emplace(mask, rng.normal());
                int pos = k - 1;
                while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
                if (pos < 0) break;
                ++idx[static_cast<std::size_t>(pos)];
                for (int j = pos + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
        break;
    }
    case GeneratorKind::random_sparse: {
        if (spec.degree < 1 || spec.degree > n) throw InputError("sparse degree must lie in [1, n]");
        if (spec.terms < 1) throw InputError("sparse generator needs at least one term");
        double available = 0.0;
        for (int k = 1; k <= spec.degree; ++k) {
            double c = 1.0;
            for (int j = 0; j < k; ++j) c = c * (n - j) / (j + 1);
            available += c;
        }
        if (static_cast<double>(spec.terms) > available) throw InputError("more terms requested than subsets exist");
        Stream rng(spec.seed, 0);
        while (static_cast<int>(terms.size()) < spec.terms) {
            const int size = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.degree)));
            std::uint64_t mask = 0;
            while (std::popcount(mask) < size) mask |= std::uint64_t{1} << rng.below(static_cast<std::uint64_t>(n));
            const double c = rng.normal();
            if (c != 0.0) terms.emplace(mask, c);
        }
        break;
    }
    }
    return SparsePolynomial(n, std::move(terms));
}

} // namespace bsa

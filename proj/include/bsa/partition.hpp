#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "bsa/polynomial.hpp"
#include "bsa/truth_table.hpp"

namespace bsa {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
/// 60 significant decimal digits; every precision request (at most 50 digits) is served from it.
using HighFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<60>,
                                                boost::multiprecision::et_off>;

inline constexpr int kMaxPrecision = 50;
inline constexpr int kCertifyPrecision = 30;
inline constexpr int kInteractivePrecision = 15;

/// Throws InputError unless 1 <= digits <= kMaxPrecision; returns 10^-digits.
HighFloat precision_epsilon(int digits);

BigInt binomial(int n, int k);

/// Hg(population, successes, draws): successes among `draws` items drawn without replacement.
struct HypergeometricParams {
    int population = 1;
    int successes = 0;
    int draws = 1;

    /// Throws InputError unless 0 <= successes <= population and 1 <= draws <= population.
    void validate() const;
    int support_min() const noexcept;
    int support_max() const noexcept;
    Rational mean() const;
    Rational variance() const;
};

/// Exact P[X = s]; zero outside the support.
Rational hg_pmf(const HypergeometricParams& params, int s);

/// E sqrt(X) with error below 10^-precision.
HighFloat mean_sqrt_hg(const HypergeometricParams& params, int precision = kInteractivePrecision);

struct BlockPartitionSpec {
    int n = 0;
    std::vector<int> sizes;
    /// Number of zeros in the 0/1 sequence.
    int k = 0;

    void validate() const;
    int blocks() const noexcept { return static_cast<int>(sizes.size()); }
    /// Every size is floor(n/b) or floor(n/b)+1, with exactly n mod b of the larger ones.
    bool almost_equal() const;
    /// Dash-joined sizes, e.g. "3-2-2".
    std::string sizes_label() const;
};

/// b blocks: n mod b of size floor(n/b)+1 first, then the rest of size floor(n/b).
std::vector<int> almost_equal_sizes(int n, int b);

/// B = b^{-1/2} sum_l E sqrt(X_l), X_l ~ Hg(n, n-k, m_l).
HighFloat block_average_B(const BlockPartitionSpec& spec, int precision = kInteractivePrecision);

/// sqrt(n-k) (1 - (b n)^{-1/2} sum_l sqrt(m_l)) + k / (2 (n-1) sqrt(b n (n-k))) sum_l (n - m_l)/sqrt(m_l)
/// for k < n.
HighFloat gap_bound(const BlockPartitionSpec& spec);

struct SandwichReport {
    BlockPartitionSpec spec;
    HighFloat A;
    HighFloat B;
    HighFloat gap;
    /// Present when k < n.
    std::optional<HighFloat> gap_bound;
    /// B <= A.
    bool pass_lower = false;
    /// A <= B + b; only decided for equal or almost-equal sizes.
    std::optional<bool> pass_upper;
    /// A - B <= gap_bound; only decided when k < n.
    std::optional<bool> pass_gap_bound;
    /// |A - B| within the certification epsilon (the equality cases b = 1, k = n, and k = 0
    /// with equal sizes).
    bool tight = false;

    bool passed() const noexcept;
};

/// Certifies the sandwich B <= A (<= B + b) for one spec. Comparisons allow a slack of
/// 10^-precision, the guaranteed error of the high-precision evaluation.
SandwichReport sandwich_check(const BlockPartitionSpec& spec, int precision = kCertifyPrecision);

/// Reports for every n in [n_min, n_max], k in [0, n], b in [1, n] with almost-equal sizes,
/// ordered by (n, k, b).
std::vector<SandwichReport> sandwich_sweep(int n_min, int n_max, int precision = kCertifyPrecision);

struct LowerBoundCensus {
    int n_max = 0;
    /// Distinct size multisets visited (B depends on sizes only through the multiset).
    std::uint64_t size_vectors = 0;
    /// (size multiset, k) pairs checked.
    std::uint64_t cases = 0;
    /// Cases whose double-precision margin was too thin and were re-decided at high precision.
    std::uint64_t rechecked = 0;
    std::uint64_t failures = 0;
};

/// B <= A for every size multiset of every n <= n_max and every k.
LowerBoundCensus certify_lower_bound_all_sizes(int n_max, int precision = kCertifyPrecision);

struct FiniteDistribution {
    std::vector<HighFloat> values;
    std::vector<HighFloat> probabilities;

    /// Normalises nonnegative weights; throws InputError on negative values or weights.
    static FiniteDistribution from_weights(const std::vector<double>& values,
                                           const std::vector<double>& weights);
    static FiniteDistribution hypergeometric(const HypergeometricParams& params);

    HighFloat mean() const;
    HighFloat variance() const;
    HighFloat mean_sqrt() const;
};

struct JensenBounds {
    HighFloat lower;
    HighFloat upper;
    HighFloat mean_sqrt;
    /// lower <= E sqrt(X) <= upper, up to the precision slack.
    bool holds = false;
};

/// sqrt(EX) - (EX)^{-3/2} Var(X) / 2 <= E sqrt(X) <= sqrt(EX). Throws DegenerateError when
/// X is identically zero.
JensenBounds jensen_bounds(const FiniteDistribution& dist, int precision = kCertifyPrecision);

/// The same bounds for aX + b (which must be nonnegative and not identically zero):
/// sqrt(a EX + b) - a^2 (a EX + b)^{-3/2} Var(X) / 2 <= E sqrt(aX + b) <= sqrt(a EX + b).
JensenBounds jensen_bounds_affine(const FiniteDistribution& dist, const HighFloat& a,
                                  const HighFloat& b, int precision = kCertifyPrecision);

/// The two-point step for almost-equal sizes: with n = b m + r, 0 <= r < b,
/// sqrt(n/b) - ((b-r) sqrt(m) + r sqrt(m+1)) / b <= (n/b)^{-3/2} r (b-r) / (2 b^2).
struct TwoPointJensen {
    HighFloat lhs;
    HighFloat rhs;
    bool holds = false;
};
TwoPointJensen two_point_jensen(int n, int b, int precision = kCertifyPrecision);

/// Monte Carlo average over uniformly random ordered partitions with the given sizes of
/// b^{-1/2} sum_l sqrt(sum_{j in Pi_l} y_j). `y` holds zeros and ones.
Estimate mc_partition_average(const std::vector<int>& y, const std::vector<int>& sizes,
                              std::uint64_t trials, std::uint64_t seed);

struct BlockBoundReport {
    int b = 0;
    std::vector<int> sizes;
    /// surface_area(f).
    double lhs = 0.0;
    /// Estimate of b^{-1/2} E_Pi sum_l E_{A^l} surface_area(f_{A^l}).
    double rhs_estimate = 0.0;
    double std_error = 0.0;
    /// lhs <= rhs_estimate + b + 4 std_error.
    bool holds = false;
};

/// Random block partition bound for BSA with almost-equal block sizes.
BlockBoundReport bsa_block_bound(const TruthTable& f, int b, std::uint64_t trials, std::uint64_t seed);

} // namespace bsa

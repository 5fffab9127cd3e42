#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bsa/core.hpp"
#include "bsa/truth_table.hpp"

namespace bsa {

class Restriction;

/// Subsets of [n] are stored as bitmasks, so polynomials live on at most 64 variables.
inline constexpr int kPolynomialCap = 64;

/// Multilinear real polynomial p(x) = sum_S c_S chi_S(x) on {-1,1}^n.
///
/// Terms are kept in a sorted map keyed by subset mask; evaluation always walks them in that
/// order so every evaluation path produces the same floating-point result. Exact zero
/// coefficients are never stored.
class SparsePolynomial {
public:
    using Terms = std::map<std::uint64_t, double>;

    explicit SparsePolynomial(int n);
    /// Zero coefficients are dropped; subsets must lie inside [n].
    SparsePolynomial(int n, Terms terms);

    int n() const noexcept { return n_; }
    const Terms& terms() const noexcept { return terms_; }
    int degree() const noexcept;
    bool is_zero() const noexcept { return terms_.empty(); }
    double coefficient(std::uint64_t subset) const noexcept;

    /// Polynomial whose coefficients are a Fourier spectrum, dropping |c| <= tolerance.
    static SparsePolynomial from_spectrum(const FourierSpectrum& spectrum, double tolerance = 0.0);

    friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

private:
    int n_;
    Terms terms_;
};

/// p(x) for a point index x < 2^n.
double eval_poly(const SparsePolynomial& p, Point x);

struct SignTable {
    TruthTable table;
    /// Points where p evaluated to exactly 0 (mapped to +1).
    std::uint64_t zero_hits = 0;
};

/// sgn(p) as a truth table, sgn(0) = +1. Throws CapacityError when n exceeds kExactCap.
SignTable sign_table(const SparsePolynomial& p);

/// Substitutes the fixed coordinates of rho and re-indexes the free ones in increasing order.
SparsePolynomial restrict_poly(const SparsePolynomial& p, const Restriction& rho);

struct PolyStats {
    /// sum_{S != {}} c_S^2.
    double variance = 0.0;
    /// influences[i] = sum_{S containing i} c_S^2.
    std::vector<double> influences;
    /// max_i influences[i] / variance; empty for constant polynomials.
    std::optional<double> regular_tau;
};

/// Throws DegenerateError for the zero polynomial.
PolyStats poly_stats(const SparsePolynomial& p);

/// D_v p(x) = sum_j v_j D_j p(x), where D_j p(x) = (p(x) - p(x^j)) / 2.
double directional_derivative(const SparsePolynomial& p, Point v, Point x);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Sample mean and its standard error. Both sums use the fixed pairwise tree; the variance
/// is summed about the mean, which avoids the cancellation of the sum-of-squares form.
Estimate sample_estimate(const std::vector<double>& values);

/// Monte Carlo estimate of alpha(p) = E min(1, |D_B p(A)|^2 / |p(A)|^2) over independent
/// uniform A, B; samples with p(A) = 0 contribute 1. Deterministic for a fixed seed.
Estimate alpha_estimate(const SparsePolynomial& p, std::uint64_t trials, std::uint64_t seed);

/// Exact alpha(p) by enumerating all 4^n pairs (A, B); n <= 12.
double alpha_exact(const SparsePolynomial& p);

enum class GeneratorKind { majority, harmonic, parity, random_dense, random_sparse };

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::majority;
    int n = 1;
    /// parity: the subset as 0-based indices.
    std::vector<int> subset;
    /// random kinds: maximal term degree.
    int degree = 1;
    /// random_sparse: number of distinct terms.
    int terms = 1;
    std::uint64_t seed = 0;
};

GeneratorKind parse_generator_kind(const std::string& name);
std::string to_string(GeneratorKind kind);

/// Builds the polynomial for a generator spec:
///   majority      sum_i x_i
///   harmonic      sum_i x_i / sqrt(i)
///   parity        chi_S
///   random_dense  standard normal coefficient on every subset of size <= degree
///   random_sparse `terms` distinct subsets of size 1..degree with standard normal coefficients
SparsePolynomial generate(const GeneratorSpec& spec);

} // namespace bsa

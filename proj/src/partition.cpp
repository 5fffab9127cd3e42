#include "bsa/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "bsa/core.hpp"
#include "bsa/error.hpp"
#include "bsa/kernels.hpp"
#include "bsa/random.hpp"
#include "bsa/restriction.hpp"

namespace bsa {

namespace {

constexpr int kPascalRows = 256;

// Binomial coefficients as high-precision floats; exact while C(n, k) < 2^199.
const std::vector<std::vector<HighFloat>>& pascal_hf() {
    static const auto table = [] {
        std::vector<std::vector<HighFloat>> rows(kPascalRows + 1);
        for (int n = 0; n <= kPascalRows; ++n) {
            auto& row = rows[static_cast<std::size_t>(n)];
            row.assign(static_cast<std::size_t>(n) + 1, HighFloat(1));
            for (int k = 1; k < n; ++k) {
                const auto& prev = rows[static_cast<std::size_t>(n - 1)];
                row[static_cast<std::size_t>(k)] = prev[static_cast<std::size_t>(k - 1)] + prev[static_cast<std::size_t>(k)];
            }
        }
        return rows;
    }();
    return table;
}

const std::vector<HighFloat>& sqrt_hf() {
    static const auto table = [] {
        std::vector<HighFloat> roots(kPascalRows + 1);
        for (int s = 0; s <= kPascalRows; ++s) roots[static_cast<std::size_t>(s)] = sqrt(HighFloat(s));
        return roots;
    }();
    return table;
}

HighFloat binomial_hf(int n, int k) {
    if (k < 0 || k > n) return HighFloat(0);
    if (n <= kPascalRows) return pascal_hf()[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    return HighFloat(binomial(n, k));
}

HighFloat sqrt_int(int s) {
    if (s >= 0 && s <= kPascalRows) return sqrt_hf()[static_cast<std::size_t>(s)];
    return sqrt(HighFloat(s));
}

HighFloat mean_sqrt_hg_unchecked(int population, int successes, int draws) {
    const int lo = std::max(0, draws - (population - successes));
    const int hi = std::min(draws, successes);
    HighFloat acc = 0;
    for (int s = std::max(lo, 1); s <= hi; ++s) {
        acc += binomial_hf(successes, s) * binomial_hf(population - successes, draws - s) * sqrt_int(s);
    }
    return acc / binomial_hf(population, draws);
}

// E sqrt(Hg(n, K, m)) for all K in [0, n], m in [1, n]; index [K][m].
std::vector<std::vector<HighFloat>> mean_sqrt_table(int n) {
    std::vector<std::vector<HighFloat>> t(static_cast<std::size_t>(n) + 1,
                                          std::vector<HighFloat>(static_cast<std::size_t>(n) + 1));
    for (int K = 0; K <= n; ++K) {
        for (int m = 1; m <= n; ++m) t[static_cast<std::size_t>(K)][static_cast<std::size_t>(m)] = mean_sqrt_hg_unchecked(n, K, m);
    }
    return t;
}

void check_precision(int digits) {
    if (digits < 1 || digits > kMaxPrecision) {
        throw InputError("precision must lie in [1, " + std::to_string(kMaxPrecision) + "] digits");
    }
}

SandwichReport evaluate_sandwich(const BlockPartitionSpec& spec, const HighFloat& B, const HighFloat& eps) {
    SandwichReport rep;
    rep.spec = spec;
    rep.A = sqrt_int(spec.n - spec.k);
    rep.B = B;
    rep.gap = rep.A - rep.B;
    rep.pass_lower = rep.B <= rep.A + eps;
    if (spec.almost_equal()) rep.pass_upper = rep.A <= rep.B + HighFloat(spec.blocks()) + eps;
    if (spec.k < spec.n) {
        rep.gap_bound = gap_bound(spec);
        rep.pass_gap_bound = rep.gap <= *rep.gap_bound + eps;
    }
    rep.tight = abs(rep.gap) <= eps;
    return rep;
}

} // namespace

HighFloat precision_epsilon(int digits) {
    check_precision(digits);
    return pow(HighFloat(10), -digits);
}

BigInt binomial(int n, int k) {
    if (n < 0) throw InputError("binomial needs n >= 0");
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt acc = 1;
    for (int i = 1; i <= k; ++i) {
        acc *= n - k + i;
        acc /= i;
    }
    return acc;
}

void HypergeometricParams::validate() const {
    if (population < 1) throw InputError("hypergeometric population must be positive");
    if (successes < 0 || successes > population) throw InputError("hypergeometric successes must lie in [0, population]");
    if (draws < 1 || draws > population) throw InputError("hypergeometric draws must lie in [1, population]");
}

int HypergeometricParams::support_min() const noexcept { return std::max(0, draws - (population - successes)); }

int HypergeometricParams::support_max() const noexcept { return std::min(draws, successes); }

Rational HypergeometricParams::mean() const {
    validate();
    return Rational(BigInt(draws) * successes, BigInt(population));
}

Rational HypergeometricParams::variance() const {
    validate();
    if (population == 1) return 0;
    const BigInt num = BigInt(draws) * successes * (population - successes) * (population - draws);
    const BigInt den = BigInt(population) * population * (population - 1);
    return Rational(num, den);
}

Rational hg_pmf(const HypergeometricParams& params, int s) {
    params.validate();
    if (s < params.support_min() || s > params.support_max()) return 0;
    const int failures = params.population - params.successes;
    return Rational(binomial(params.successes, s) * binomial(failures, params.draws - s),
                    binomial(params.population, params.draws));
}

HighFloat mean_sqrt_hg(const HypergeometricParams& params, int precision) {
    params.validate();
    check_precision(precision);
    return mean_sqrt_hg_unchecked(params.population, params.successes, params.draws);
}

void BlockPartitionSpec::validate() const {
    if (n < 1) throw InputError("partition needs n >= 1");
    if (k < 0 || k > n) throw InputError("zero count k must lie in [0, n]");
    if (sizes.empty()) throw InputError("partition needs at least one block");
    long total = 0;
    for (int m : sizes) {
        if (m < 1) throw InputError("block sizes must be positive");
        total += m;
    }
    if (total != n) throw InputError("block sizes must sum to n");
}

bool BlockPartitionSpec::almost_equal() const {
    const int b = blocks();
    if (b == 0) return false;
    const int m = n / b;
    const int r = n % b;
    int larger = 0;
    for (int s : sizes) {
        if (s == m + 1) {
            ++larger;
        } else if (s != m) {
            return false;
        }
    }
    return larger == r;
}

std::string BlockPartitionSpec::sizes_label() const {
    std::string out;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(sizes[i]);
    }
    return out;
}

std::vector<int> almost_equal_sizes(int n, int b) {
    if (b < 1 || b > n) throw InputError("block count b must lie in [1, n]");
    const int m = n / b;
    const int r = n % b;
    std::vector<int> sizes(static_cast<std::size_t>(b), m);
    for (int i = 0; i < r; ++i) sizes[static_cast<std::size_t>(i)] = m + 1;
    return sizes;
}

HighFloat block_average_B(const BlockPartitionSpec& spec, int precision) {
    spec.validate();
    check_precision(precision);
    HighFloat acc = 0;
    std::vector<int> sorted = spec.sizes;
    std::sort(sorted.begin(), sorted.end());
    // Equal sizes share one hypergeometric expectation.
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        acc += HighFloat(static_cast<int>(j - i)) * mean_sqrt_hg_unchecked(spec.n, spec.n - spec.k, sorted[i]);
        i = j;
    }
    return acc / sqrt_int(spec.blocks());
}

HighFloat gap_bound(const BlockPartitionSpec& spec) {
    spec.validate();
    if (spec.k >= spec.n) throw DegenerateError("gap bound is stated for k < n");
    const HighFloat n(spec.n);
    const HighFloat b(spec.blocks());
    const HighFloat ones(spec.n - spec.k);
    HighFloat root_sum = 0;
    HighFloat spread_sum = 0;
    for (int m : spec.sizes) {
        root_sum += sqrt_int(m);
        spread_sum += HighFloat(spec.n - m) / sqrt_int(m);
    }
    HighFloat bound = sqrt(ones) * (1 - root_sum / sqrt(b * n));
    if (spec.k > 0) bound += HighFloat(spec.k) / (2 * (n - 1) * sqrt(b * n * ones)) * spread_sum;
    return bound;
}

bool SandwichReport::passed() const noexcept {
    return pass_lower && pass_upper.value_or(true) && pass_gap_bound.value_or(true);
}

SandwichReport sandwich_check(const BlockPartitionSpec& spec, int precision) {
    spec.validate();
    const HighFloat eps = precision_epsilon(precision);
    return evaluate_sandwich(spec, block_average_B(spec, precision), eps);
}

std::vector<SandwichReport> sandwich_sweep(int n_min, int n_max, int precision) {
    if (n_min < 1 || n_max < n_min) throw InputError("sweep needs 1 <= n_min <= n_max");
    if (n_max > kPascalRows) throw CapacityError("sandwich sweep is limited to n <= 256");
    const HighFloat eps = precision_epsilon(precision);

    const int span = n_max - n_min + 1;
    std::vector<std::vector<SandwichReport>> per_n(static_cast<std::size_t>(span));
#pragma omp parallel for schedule(dynamic, 1)
    for (int idx = span - 1; idx >= 0; --idx) {
        const int n = n_min + idx;
        const auto table = mean_sqrt_table(n);
        auto& out = per_n[static_cast<std::size_t>(idx)];
        out.reserve(static_cast<std::size_t>((n + 1) * n));
        for (int k = 0; k <= n; ++k) {
            const auto& row = table[static_cast<std::size_t>(n - k)];
            for (int b = 1; b <= n; ++b) {
                BlockPartitionSpec spec{n, almost_equal_sizes(n, b), k};
                const int m = n / b;
                const int r = n % b;
                HighFloat B = HighFloat(b - r) * row[static_cast<std::size_t>(m)];
                if (r > 0) B += HighFloat(r) * row[static_cast<std::size_t>(m + 1)];
                B /= sqrt_int(b);
                out.push_back(evaluate_sandwich(spec, B, eps));
            }
        }
    }
    std::vector<SandwichReport> all;
    for (auto& chunk : per_n) {
        for (auto& rep : chunk) all.push_back(std::move(rep));
    }
    return all;
}

namespace {

struct CensusWalker {
    int n;
    const std::vector<std::vector<double>>& table;  // [K][m] in double
    int precision;
    LowerBoundCensus census;
    std::vector<int> parts;
    std::vector<std::vector<double>> sums;  // running sum over K per depth

    void visit(int remaining, int max_part, int depth) {
        if (remaining == 0) {
            leaf(depth);
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            parts.push_back(part);
            auto& next = sums[static_cast<std::size_t>(depth) + 1];
            const auto& prev = sums[static_cast<std::size_t>(depth)];
            for (int K = 0; K <= n; ++K) {
                next[static_cast<std::size_t>(K)] = prev[static_cast<std::size_t>(K)] + table[static_cast<std::size_t>(K)][static_cast<std::size_t>(part)];
            }
            visit(remaining - part, part, depth + 1);
            parts.pop_back();
        }
    }

    void leaf(int depth) {
        ++census.size_vectors;
        const int b = static_cast<int>(parts.size());
        const double root_b = std::sqrt(static_cast<double>(b));
        const auto& sum = sums[static_cast<std::size_t>(depth)];
        for (int k = 0; k <= n; ++k) {
            ++census.cases;
            const int K = n - k;
            if (K == 0) continue;  // B = A = 0 exactly: every E sqrt(Hg(n, 0, m)) is exactly 0.
            const double margin = std::sqrt(static_cast<double>(K)) - sum[static_cast<std::size_t>(K)] / root_b;
            // Double evaluation error is below 1e-12 here; thinner margins go to high precision.
            if (margin > 1e-9) continue;
            ++census.rechecked;
            const BlockPartitionSpec spec{n, parts, k};
            if (!sandwich_check(spec, precision).pass_lower) ++census.failures;
        }
    }
};

} // namespace

LowerBoundCensus certify_lower_bound_all_sizes(int n_max, int precision) {
    check_precision(precision);
    if (n_max < 1) throw InputError("census needs n_max >= 1");
    if (n_max > 80) throw CapacityError("size-multiset census is limited to n <= 80");

    std::vector<LowerBoundCensus> per_n(static_cast<std::size_t>(n_max) + 1);
#pragma omp parallel for schedule(dynamic, 1)
    for (int n = n_max; n >= 1; --n) {
        const auto hf = mean_sqrt_table(n);
        std::vector<std::vector<double>> table(hf.size());
        for (std::size_t K = 0; K < hf.size(); ++K) {
            table[K].reserve(hf[K].size());
            for (const auto& v : hf[K]) table[K].push_back(static_cast<double>(v));
        }
        CensusWalker walker{n, table, precision, {}, {}, {}};
        walker.sums.assign(static_cast<std::size_t>(n) + 1, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
        walker.visit(n, n, 0);
        per_n[static_cast<std::size_t>(n)] = walker.census;
    }
    LowerBoundCensus total;
    total.n_max = n_max;
    for (const auto& c : per_n) {
        total.size_vectors += c.size_vectors;
        total.cases += c.cases;
        total.rechecked += c.rechecked;
        total.failures += c.failures;
    }
    return total;
}

FiniteDistribution FiniteDistribution::from_weights(const std::vector<double>& values, const std::vector<double>& weights) {
    if (values.size() != weights.size() || values.empty()) throw InputError("values and weights must be nonempty and aligned");
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0) || !std::isfinite(values[i])) throw InputError("distribution values must be finite and nonnegative");
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) throw InputError("distribution weights must be finite and nonnegative");
        total += weights[i];
    }
    if (total <= 0.0) throw InputError("distribution weights must not all vanish");
    FiniteDistribution d;
    HighFloat sum = 0;
    for (double w : weights) sum += HighFloat(w);
    for (std::size_t i = 0; i < values.size(); ++i) {
        d.values.emplace_back(values[i]);
        d.probabilities.push_back(HighFloat(weights[i]) / sum);
    }
    return d;
}

FiniteDistribution FiniteDistribution::hypergeometric(const HypergeometricParams& params) {
    params.validate();
    FiniteDistribution d;
    const HighFloat total = binomial_hf(params.population, params.draws);
    const int failures = params.population - params.successes;
    for (int s = params.support_min(); s <= params.support_max(); ++s) {
        d.values.emplace_back(s);
        d.probabilities.push_back(binomial_hf(params.successes, s) * binomial_hf(failures, params.draws - s) / total);
    }
    return d;
}

HighFloat FiniteDistribution::mean() const {
    HighFloat acc = 0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += probabilities[i] * values[i];
    return acc;
}

HighFloat FiniteDistribution::variance() const {
    const HighFloat mu = mean();
    HighFloat acc = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const HighFloat d = values[i] - mu;
        acc += probabilities[i] * d * d;
    }
    return acc;
}

HighFloat FiniteDistribution::mean_sqrt() const {
    HighFloat acc = 0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += probabilities[i] * sqrt(values[i]);
    return acc;
}

JensenBounds jensen_bounds(const FiniteDistribution& dist, int precision) {
    return jensen_bounds_affine(dist, HighFloat(1), HighFloat(0), precision);
}

JensenBounds jensen_bounds_affine(const FiniteDistribution& dist, const HighFloat& a, const HighFloat& b, int precision) {
    const HighFloat eps = precision_epsilon(precision);
    if (dist.values.empty()) throw DegenerateError("empty distribution");
    FiniteDistribution shifted = dist;
    bool nonzero = false;
    for (auto& v : shifted.values) {
        v = a * v + b;
        if (v < 0) throw InputError("aX + b must be nonnegative");
        if (v > 0) nonzero = true;
    }
    // Only support points with positive probability matter for "X is nonzero".
    HighFloat mass_on_positive = 0;
    for (std::size_t i = 0; i < shifted.values.size(); ++i) {
        if (shifted.values[i] > 0) mass_on_positive += shifted.probabilities[i];
    }
    if (!nonzero || mass_on_positive == 0) throw DegenerateError("Jensen bounds need a random variable that is not identically zero");

    JensenBounds jb;
    const HighFloat mu = a * dist.mean() + b;
    jb.upper = sqrt(mu);
    jb.lower = jb.upper - (a * a) / 2 * pow(mu, HighFloat(-1.5)) * dist.variance();
    jb.mean_sqrt = shifted.mean_sqrt();
    const HighFloat slack = eps * std::max(HighFloat(1), jb.upper);
    jb.holds = jb.lower <= jb.mean_sqrt + slack && jb.mean_sqrt <= jb.upper + slack;
    return jb;
}

TwoPointJensen two_point_jensen(int n, int b, int precision) {
    if (b < 1 || b > n) throw InputError("two-point step needs 1 <= b <= n");
    const HighFloat eps = precision_epsilon(precision);
    const int m = n / b;
    const int r = n % b;
    const HighFloat ratio = HighFloat(n) / HighFloat(b);
    TwoPointJensen tp;
    tp.lhs = sqrt(ratio) - (HighFloat(b - r) * sqrt_int(m) + HighFloat(r) * sqrt_int(m + 1)) / HighFloat(b);
    tp.rhs = pow(ratio, HighFloat(-1.5)) * HighFloat(r) * HighFloat(b - r) / (2 * HighFloat(b) * HighFloat(b));
    tp.holds = tp.lhs <= tp.rhs + eps;
    return tp;
}

Estimate mc_partition_average(const std::vector<int>& y, const std::vector<int>& sizes, std::uint64_t trials,
                              std::uint64_t seed) {
    if (trials < 1) throw InputError("partition average needs at least one trial");
    for (int v : y) {
        if (v != 0 && v != 1) throw InputError("sequence entries must be 0 or 1");
    }
    long total = 0;
    for (int m : sizes) {
        if (m < 1) throw InputError("block sizes must be positive");
        total += m;
    }
    if (sizes.empty() || total != static_cast<long>(y.size())) throw InputError("block sizes must sum to the sequence length");

    const std::size_t n = y.size();
    const double inv_root_b = 1.0 / std::sqrt(static_cast<double>(sizes.size()));
    std::vector<double> roots(n + 1);
    for (std::size_t s = 0; s <= n; ++s) roots[s] = std::sqrt(static_cast<double>(s));

    std::vector<double> values(trials);
    const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel
    {
        std::vector<int> perm(n);
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < count; ++t) {
            Stream rng(seed, static_cast<std::uint64_t>(t));
            std::copy(y.begin(), y.end(), perm.begin());
            // Fisher-Yates from the front; position i receives a uniform remaining element.
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
                std::swap(perm[i], perm[j]);
            }
            double acc = 0.0;
            std::size_t pos = 0;
            for (int m : sizes) {
                int ones = 0;
                for (int j = 0; j < m; ++j) ones += perm[pos++];
                acc += roots[static_cast<std::size_t>(ones)];
            }
            const double v = acc * inv_root_b;
            values[static_cast<std::size_t>(t)] = v;
        }
    }
    return sample_estimate(values);
}

BlockBoundReport bsa_block_bound(const TruthTable& f, int b, std::uint64_t trials, std::uint64_t seed) {
    const int n = f.n();
    if (n < 1) throw InputError("block bound needs n >= 1");
    if (trials < 1) throw InputError("block bound needs at least one trial");
    BlockBoundReport rep;
    rep.b = b;
    rep.sizes = almost_equal_sizes(n, b);
    rep.lhs = surface_area(f);

    const double inv_root_b = 1.0 / std::sqrt(static_cast<double>(b));
    std::vector<double> values(trials);
    const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel
    {
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::vector<Slot> pattern(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < count; ++t) {
            Stream rng(seed, static_cast<std::uint64_t>(t));
            std::iota(perm.begin(), perm.end(), 0);
            for (std::size_t i = 0; i + 1 < perm.size(); ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(perm.size() - i));
                std::swap(perm[i], perm[j]);
            }
            double acc = 0.0;
            std::size_t pos = 0;
            for (int m : rep.sizes) {
                // Outside assignment A^l: uniform signs off the block, the block stays free.
                for (auto& slot : pattern) slot = (rng() & 1U) ? Slot::minus : Slot::plus;
                for (int j = 0; j < m; ++j) pattern[static_cast<std::size_t>(perm[pos++])] = Slot::free;
                const TruthTable restricted = restrict_table(f, Restriction(n, pattern));
                acc += surface_area(kernels::serial::sensitivity_profile(restricted));
            }
            const double v = acc * inv_root_b;
            values[static_cast<std::size_t>(t)] = v;
        }
    }
    const Estimate est = sample_estimate(values);
    rep.rhs_estimate = est.value;
    rep.std_error = est.std_error;
    rep.holds = rep.lhs <= rep.rhs_estimate + b + 4.0 * rep.std_error;
    return rep;
}

} // namespace bsa

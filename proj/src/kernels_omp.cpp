#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <vector>

#include <omp.h>

#include "bsa/error.hpp"
#include "bsa/kernels.hpp"
#include "bsa/polynomial.hpp"

namespace bsa::kernels {

namespace detail {
double pairwise_tree(const double* v, std::size_t count);
double block_sum(const double* v, std::size_t count);
} // namespace detail

namespace {

// Positions whose bit i is 0, for in-word flips i < 6.
constexpr std::array<std::uint64_t, 6> kLowHalf = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

inline std::uint64_t flip_in_word(std::uint64_t w, int i) {
    const int shift = 1 << i;
    return ((w >> shift) & kLowHalf[static_cast<std::size_t>(i)]) |
           ((w & kLowHalf[static_cast<std::size_t>(i)]) << shift);
}

// s_f <= 24 fits in five bit planes.
constexpr int kPlanes = 5;

} // namespace

namespace parallel {

SensitivityProfile sensitivity_profile(const TruthTable& f) {
    const int n = f.n();
    const auto words = f.words();
    const auto word_total = static_cast<std::int64_t>(words.size());
    const std::uint64_t valid = n >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;

    SensitivityProfile prof;
    prof.n = n;
    prof.counts.assign(static_cast<std::size_t>(n) + 1, 0);
    prof.coordinate_counts.assign(static_cast<std::size_t>(n), 0);

#pragma omp parallel
    {
        std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
        std::vector<std::uint64_t> coords(static_cast<std::size_t>(n), 0);

#pragma omp for schedule(static)
        for (std::int64_t wi = 0; wi < word_total; ++wi) {
            const std::uint64_t w = words[static_cast<std::size_t>(wi)];
            std::array<std::uint64_t, kPlanes> planes{};
            for (int i = 0; i < n; ++i) {
                std::uint64_t partner;
                if (i < 6) {
                    partner = flip_in_word(w, i);
                } else {
                    partner = words[static_cast<std::size_t>(wi ^ (std::int64_t{1} << (i - 6)))];
                }
                std::uint64_t carry = (w ^ partner) & valid;
                coords[static_cast<std::size_t>(i)] += static_cast<std::uint64_t>(std::popcount(carry));
                for (int b = 0; b < kPlanes && carry; ++b) {
                    const std::uint64_t next = planes[static_cast<std::size_t>(b)] & carry;
                    planes[static_cast<std::size_t>(b)] ^= carry;
                    carry = next;
                }
            }
            const int bits = n >= 6 ? 64 : (1 << n);
            for (int j = 0; j < bits; ++j) {
                unsigned v = 0;
                for (int b = 0; b < kPlanes; ++b) v |= static_cast<unsigned>((planes[static_cast<std::size_t>(b)] >> j) & 1U) << b;
                ++counts[v];
            }
        }

#pragma omp critical(bsa_profile_merge)
        {
            for (std::size_t m = 0; m < counts.size(); ++m) prof.counts[m] += counts[m];
            for (std::size_t i = 0; i < coords.size(); ++i) prof.coordinate_counts[i] += coords[i];
        }
    }
    return prof;
}

void walsh_hadamard(std::span<double> data) {
    const std::size_t len = data.size();
    if (len == 0 || (len & (len - 1)) != 0) throw InputError("Walsh-Hadamard length must be a power of two");
    // Stages with h < chunk stay inside one cache-sized chunk, so chunks run independently;
    // the remaining stages work on contiguous runs of `chunk` elements. Every element sees the
    // same butterflies in the same order as the serial transform.
    constexpr std::size_t kChunk = 4096;
    const std::size_t chunk = std::min(len, kChunk);
    const auto chunks = static_cast<std::int64_t>(len / chunk);
#pragma omp parallel for schedule(static) if (chunks >= 2)
    for (std::int64_t c = 0; c < chunks; ++c) {
        double* block = data.data() + static_cast<std::size_t>(c) * chunk;
        for (std::size_t h = 1; h < chunk; h <<= 1) {
            for (std::size_t i = 0; i < chunk; i += 2 * h) {
                for (std::size_t j = i; j < i + h; ++j) {
                    const double a = block[j];
                    const double b = block[j + h];
                    block[j] = a + b;
                    block[j + h] = a - b;
                }
            }
        }
    }
    const auto runs = static_cast<std::int64_t>(len / 2 / chunk);
    for (std::size_t h = chunk; h < len; h <<= 1) {
        const std::size_t runs_per_half = h / chunk;
#pragma omp parallel for schedule(static) if (runs >= 2)
        for (std::int64_t r = 0; r < runs; ++r) {
            const auto ur = static_cast<std::size_t>(r);
            double* lo = data.data() + (ur / runs_per_half) * 2 * h + (ur % runs_per_half) * chunk;
            double* hi = lo + h;
            for (std::size_t j = 0; j < chunk; ++j) {
                const double a = lo[j];
                const double b = hi[j];
                lo[j] = a + b;
                hi[j] = a - b;
            }
        }
    }
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t blocks = (values.size() + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(blocks);
    const auto block_total = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static) if (blocks >= 8)
    for (std::int64_t b = 0; b < block_total; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kSumBlock;
        const std::size_t count = std::min(kSumBlock, values.size() - begin);
        partial[static_cast<std::size_t>(b)] = detail::block_sum(values.data() + begin, count);
    }
    return detail::pairwise_tree(partial.data(), partial.size());
}

SignTableResult sign_table(const SparsePolynomial& p) {
    const int n = p.n();
    if (n > kExactCap) {
        throw CapacityError("sign table needs n <= " + std::to_string(kExactCap) + ", got " + std::to_string(n));
    }
    const std::size_t word_total = n >= 6 ? (std::size_t{1} << (n - 6)) : 1;
    const Point points = Point{1} << n;
    std::vector<std::uint64_t> words(word_total, 0);
    std::uint64_t zeros = 0;
    const auto total = static_cast<std::int64_t>(word_total);

    // Flat copies of the terms, kept in map order so every point sums exactly as eval_poly does.
    std::vector<std::uint64_t> masks;
    std::vector<double> coefs;
    masks.reserve(p.terms().size());
    coefs.reserve(p.terms().size());
    for (const auto& [subset, c] : p.terms()) {
        masks.push_back(subset);
        coefs.push_back(c);
    }
    const std::size_t term_count = masks.size();

    // Within a word only the low six bits of x move, so chi_S(x) splits into a per-word sign
    // times a table lookup, and the 64 points of a word are updated together term by term.
    static constexpr auto parity6 = [] {
        std::array<std::uint8_t, 64> t{};
        for (unsigned i = 0; i < 64; ++i) t[i] = static_cast<std::uint8_t>(std::popcount(i) & 1);
        return t;
    }();

#pragma omp parallel for schedule(static) reduction(+ : zeros) if (points >= 4096)
    for (std::int64_t wi = 0; wi < total; ++wi) {
        const Point base = static_cast<Point>(wi) << 6;
        const auto count = static_cast<unsigned>(std::min<Point>(64, points - base));
        std::array<double, 64> v{};
        for (std::size_t j = 0; j < term_count; ++j) {
            const double c = (std::popcount(masks[j] & base) & 1) ? -coefs[j] : coefs[j];
            const auto low = static_cast<unsigned>(masks[j] & 63U);
            for (unsigned x = 0; x < count; ++x) v[x] += parity6[low & x] ? -c : c;
        }
        std::uint64_t w = 0;
        for (unsigned x = 0; x < count; ++x) {
            if (v[x] == 0.0) ++zeros;
            if (v[x] < 0.0) w |= std::uint64_t{1} << x;
        }
        words[static_cast<std::size_t>(wi)] = w;
    }
    return {TruthTable::from_words(n, std::move(words)), zeros};
}

} // namespace parallel

int worker_count() { return omp_get_max_threads(); }

void set_worker_count(int n) {
    if (n < 1) throw InputError("worker count must be at least 1");
    omp_set_num_threads(n);
}

} // namespace bsa::kernels

#include <cstddef>
#include <vector>

#include "bsa/error.hpp"
#include "bsa/kernels.hpp"
#include "bsa/polynomial.hpp"

namespace bsa::kernels {

namespace detail {

double pairwise_tree(const double* v, std::size_t count) {
    if (count == 0) return 0.0;
    if (count == 1) return v[0];
    const std::size_t half = count / 2;
    return pairwise_tree(v, half) + pairwise_tree(v + half, count - half);
}

double block_sum(const double* v, std::size_t count) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += v[i];
    return s;
}

} // namespace detail

namespace serial {

SensitivityProfile sensitivity_profile(const TruthTable& f) {
    const int n = f.n();
    SensitivityProfile prof;
    prof.n = n;
    prof.counts.assign(static_cast<std::size_t>(n) + 1, 0);
    prof.coordinate_counts.assign(static_cast<std::size_t>(n), 0);
    for (Point x = 0; x < f.size(); ++x) {
        int s = 0;
        for (int i = 0; i < n; ++i) {
            if (f.bit(x) != f.bit(x ^ (Point{1} << i))) {
                ++s;
                ++prof.coordinate_counts[static_cast<std::size_t>(i)];
            }
        }
        ++prof.counts[static_cast<std::size_t>(s)];
    }
    return prof;
}

void walsh_hadamard(std::span<double> data) {
    const std::size_t len = data.size();
    if (len == 0 || (len & (len - 1)) != 0) throw InputError("Walsh-Hadamard length must be a power of two");
    for (std::size_t h = 1; h < len; h <<= 1) {
        for (std::size_t i = 0; i < len; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = data[j];
                const double b = data[j + h];
                data[j] = a + b;
                data[j + h] = a - b;
            }
        }
    }
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t blocks = (values.size() + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t begin = b * kSumBlock;
        const std::size_t count = std::min(kSumBlock, values.size() - begin);
        partial[b] = detail::block_sum(values.data() + begin, count);
    }
    return detail::pairwise_tree(partial.data(), partial.size());
}

SignTableResult sign_table(const SparsePolynomial& p) {
    if (p.n() > kExactCap) {
        throw CapacityError("sign table needs n <= " + std::to_string(kExactCap) + ", got " + std::to_string(p.n()));
    }
    std::uint64_t zeros = 0;
    TruthTable t = TruthTable::from_predicate(p.n(), [&](Point x) {
        const double v = eval_poly(p, x);
        if (v == 0.0) ++zeros;
        return v < 0.0;
    });
    return {std::move(t), zeros};
}

} // namespace serial
} // namespace bsa::kernels

#pragma once

// Hot loops of the library, each in two builds: a plain serial reference that reads like the
// definition, and an OpenMP version that the public API uses. Tests check that the two agree
// exactly; bench/ times them against each other.

#include <cstdint>
#include <span>
#include <vector>

#include "bsa/core.hpp"
#include "bsa/truth_table.hpp"

namespace bsa {
class SparsePolynomial;
}

namespace bsa::kernels {

/// Block length used by the deterministic sums. Per-block partial sums are combined by a
/// fixed pairwise tree, so the result depends only on the data, never on the thread count.
inline constexpr std::size_t kSumBlock = 1024;

struct SignTableResult {
    TruthTable table;
    std::uint64_t zero_hits = 0;
};

namespace serial {

/// Point-by-point flip enumeration.
SensitivityProfile sensitivity_profile(const TruthTable& f);
/// Unnormalised in-place Walsh-Hadamard butterfly; length must be a power of two.
void walsh_hadamard(std::span<double> data);
double pairwise_sum(std::span<const double> values);
SignTableResult sign_table(const SparsePolynomial& p);

} // namespace serial

namespace parallel {

/// Word-level bit-sliced counting, parallel over 64-point words.
SensitivityProfile sensitivity_profile(const TruthTable& f);
void walsh_hadamard(std::span<double> data);
double pairwise_sum(std::span<const double> values);
SignTableResult sign_table(const SparsePolynomial& p);

} // namespace parallel

/// Number of OpenMP workers currently in effect (1 when built without OpenMP).
int worker_count();
/// Sets the OpenMP worker count for subsequent parallel regions; n >= 1.
void set_worker_count(int n);

} // namespace bsa::kernels

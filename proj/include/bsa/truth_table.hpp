#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bsa {

/// Largest n for which whole-cube enumeration is allowed (2^24 points, 2 MiB packed).
inline constexpr int kExactCap = 24;

/// A point of {-1,1}^n encoded as an integer: bit i set means x_{i+1} = -1.
/// Flipping coordinate i is `x ^ (1 << i)`.
using Point = std::uint64_t;

inline constexpr int coordinate(Point x, int i) noexcept { return ((x >> i) & 1U) ? -1 : 1; }

/// A Boolean function f : {-1,1}^n -> {-1,1}, packed one bit per point (bit set means -1).
///
/// Immutable once built. n = 0 is allowed and denotes a single value (what a fully fixed
/// restriction leaves behind).
class TruthTable {
public:
    /// The constant +1 function on n variables.
    explicit TruthTable(int n);

    /// Builds from a sign per point; every entry must be -1 or +1.
    static TruthTable from_signs(int n, std::span<const int> signs);

    /// Builds from raw packed words (bit set means -1); trailing bits beyond 2^n must be zero.
    static TruthTable from_words(int n, std::vector<std::uint64_t> words);

    /// Builds by evaluating `fn(Point) -> bool` where true means -1.
    template <class Fn>
    static TruthTable from_predicate(int n, Fn&& fn) {
        TruthTable t(n);
        for (Point x = 0; x < t.size(); ++x) {
            if (fn(x)) t.words_[x >> 6] |= std::uint64_t{1} << (x & 63);
        }
        return t;
    }

    static TruthTable constant(int n, int sign);
    /// x_{i+1} (0-based i).
    static TruthTable dictator(int n, int i);
    /// chi_S for the subset given as a bitmask.
    static TruthTable parity(int n, std::uint64_t subset);
    /// sgn(x_1 + ... + x_n) with sgn(0) = +1.
    static TruthTable majority(int n);

    int n() const noexcept { return n_; }
    std::uint64_t size() const noexcept { return std::uint64_t{1} << n_; }

    /// true when f(x) = -1.
    bool bit(Point x) const noexcept { return (words_[x >> 6] >> (x & 63)) & 1U; }
    int value(Point x) const noexcept { return bit(x) ? -1 : 1; }
    /// Range-checked value(); throws InputError.
    int at(Point x) const;

    std::span<const std::uint64_t> words() const noexcept { return words_; }
    std::uint64_t count_minus() const noexcept;

    /// "+-" string in index order (the body of the truth-table file format).
    std::string to_sign_string() const;
    static TruthTable from_sign_string(int n, std::string_view text);

    friend bool operator==(const TruthTable&, const TruthTable&) = default;

private:
    TruthTable(int n, std::vector<std::uint64_t> words) : n_(n), words_(std::move(words)) {}

    int n_;
    std::vector<std::uint64_t> words_;
};

} // namespace bsa

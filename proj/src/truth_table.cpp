#include "bsa/truth_table.hpp"

#include <bit>
#include <string>

#include "bsa/error.hpp"

namespace bsa {

namespace {

std::size_t word_count(int n) { return n >= 6 ? (std::size_t{1} << (n - 6)) : 1; }

void check_n(int n) {
    if (n < 0) throw InputError("variable count must be nonnegative, got " + std::to_string(n));
    if (n > kExactCap) {
        throw CapacityError("truth tables are limited to n <= " + std::to_string(kExactCap) + ", got " +
                            std::to_string(n));
    }
}

} // namespace

TruthTable::TruthTable(int n) : n_(n) {
    check_n(n);
    words_.assign(word_count(n), 0);
}

TruthTable TruthTable::from_signs(int n, std::span<const int> signs) {
    TruthTable t(n);
    if (signs.size() != t.size()) {
        throw InputError("expected " + std::to_string(t.size()) + " signs, got " + std::to_string(signs.size()));
    }
    for (Point x = 0; x < t.size(); ++x) {
        const int s = signs[x];
        if (s != 1 && s != -1) throw InputError("truth table entries must be -1 or +1");
        if (s == -1) t.words_[x >> 6] |= std::uint64_t{1} << (x & 63);
    }
    return t;
}

TruthTable TruthTable::from_words(int n, std::vector<std::uint64_t> words) {
    check_n(n);
    if (words.size() != word_count(n)) throw InputError("packed word count does not match n");
    if (n < 6) {
        const std::uint64_t mask = (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
        if (words[0] & ~mask) throw InputError("bits set beyond 2^n in packed table");
    }
    return TruthTable(n, std::move(words));
}

TruthTable TruthTable::constant(int n, int sign) {
    if (sign != 1 && sign != -1) throw InputError("constant must be -1 or +1");
    return from_predicate(n, [sign](Point) { return sign == -1; });
}

TruthTable TruthTable::dictator(int n, int i) {
    if (i < 0 || i >= n) throw InputError("dictator coordinate out of range");
    return from_predicate(n, [i](Point x) { return ((x >> i) & 1U) != 0; });
}

TruthTable TruthTable::parity(int n, std::uint64_t subset) {
    if (n < 64 && (subset >> n) != 0) throw InputError("parity subset outside [n]");
    return from_predicate(n, [subset](Point x) { return (std::popcount(x & subset) & 1) != 0; });
}

TruthTable TruthTable::majority(int n) {
    // sum = n - 2 * (#minus); negative iff #minus > n/2.
    return from_predicate(n, [n](Point x) { return 2 * std::popcount(x) > n; });
}

int TruthTable::at(Point x) const {
    if (x >= size()) {
        throw InputError("point index " + std::to_string(x) + " out of range for n = " + std::to_string(n_));
    }
    return value(x);
}

std::uint64_t TruthTable::count_minus() const noexcept {
    std::uint64_t c = 0;
    for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
}

std::string TruthTable::to_sign_string() const {
    std::string s(size(), '+');
    for (Point x = 0; x < size(); ++x) {
        if (bit(x)) s[x] = '-';
    }
    return s;
}

TruthTable TruthTable::from_sign_string(int n, std::string_view text) {
    TruthTable t(n);
    if (text.size() != t.size()) {
        throw InputError("expected " + std::to_string(t.size()) + " sign characters, got " +
                         std::to_string(text.size()));
    }
    for (Point x = 0; x < t.size(); ++x) {
        const char c = text[x];
        if (c == '-') {
            t.words_[x >> 6] |= std::uint64_t{1} << (x & 63);
        } else if (c != '+') {
            throw InputError("truth table characters must be '+' or '-'");
        }
    }
    return t;
}

} // namespace bsa

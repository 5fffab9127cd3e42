#pragma once

#include <string>
#include <variant>

#include "bsa/polynomial.hpp"
#include "bsa/truth_table.hpp"

namespace bsa::app {

/// A function given on the command line. Accepted forms:
///   maj:<n>  harm:<n>  par:<n>[:<i,j,...>]          named generators, 1-indexed subset
///   rand:d=<d>,n=<n>[,seed=<s>]                      random dense PTF
///   sparse:d=<d>,n=<n>,terms=<t>[,seed=<s>]          random sparse PTF
///   {"n": .., "terms": [{"vars": [..], "coef": ..}]}  inline polynomial JSON
///   json:<path>                                      polynomial JSON read from a file
///   tt:<path>                                        truth-table file: "n=<int>" then 2^n of +/-
struct FunctionSpec {
    std::string text;
    std::variant<GeneratorSpec, SparsePolynomial, TruthTable> source;

    int n() const;
    bool has_polynomial() const noexcept { return source.index() != 2; }
    /// Throws InputError for truth-table files.
    SparsePolynomial polynomial() const;
    /// Sign table of the polynomial (sgn(0) = +1) or the file contents; CapacityError above the
    /// exact-mode cap.
    TruthTable table() const;
};

/// Throws ParseError (with a 0-based position into `text`) on malformed input and
/// CapacityError when n exceeds the storage cap.
FunctionSpec parse_function_spec(const std::string& text);

SparsePolynomial parse_polynomial_json(const std::string& json_text);
TruthTable parse_truth_table(const std::string& contents);

} // namespace bsa::app

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace bsa::app {

/// JSON object keys keep insertion order, so reports read in a fixed, meaningful order.
using Json = nlohmann::ordered_json;

/// %.17g in the classic locale: round-trips every double.
std::string format_double(double v);

/// Rows of typed cells with a fixed header; rendered as CSV or as a JSON array of objects.
class Table {
public:
    explicit Table(std::vector<std::string> header);

    /// Cells are JSON scalars (number, bool, string or null), one per header column.
    void add_row(std::vector<Json> cells);
    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return rows_.size(); }

    void write_csv(std::ostream& out) const;
    Json to_json() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<Json>> rows_;
};

/// Writes JSON with two-space indentation and a trailing newline.
void write_json(std::ostream& out, const Json& doc);

/// "5", "1..9" or "1,3,5" (combinations such as "1..3,7" are allowed).
std::vector<int> parse_int_list(const std::string& text);
/// Comma-separated decimals or fractions such as "1/16".
std::vector<double> parse_real_list(const std::string& text);

} // namespace bsa::app

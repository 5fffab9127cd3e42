#include "report.hpp"

#include <charconv>
#include <iomanip>
#include <locale>
#include <sstream>

#include "bsa/error.hpp"

namespace bsa::app {

std::string format_double(double v) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << std::setprecision(17) << v;
    return out.str();
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(std::vector<Json> cells) {
    if (cells.size() != header_.size()) throw std::logic_error("row width does not match the header");
    rows_.push_back(std::move(cells));
}

namespace {

std::string csv_cell(const Json& cell) {
    if (cell.is_null()) return "";
    if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
    if (cell.is_number_integer()) return cell.dump();
    if (cell.is_number_float()) return format_double(cell.get<double>());
    const auto text = cell.is_string() ? cell.get<std::string>() : cell.dump();
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

} // namespace

void Table::write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
}

Json Table::to_json() const {
    auto arr = Json::array();
    for (const auto& row : rows_) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[header_[i]] = row[i];
        arr.push_back(std::move(obj));
    }
    return arr;
}

void write_json(std::ostream& out, const Json& doc) { out << doc.dump(2) << '\n'; }

namespace {

int to_int(std::string_view s, const std::string& whole) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw InputError("malformed integer list '" + whole + "'");
    }
    return v;
}

double to_real(std::string_view s, const std::string& whole) {
    const auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        const double num = to_real(s.substr(0, slash), whole);
        const double den = to_real(s.substr(slash + 1), whole);
        if (den == 0.0) throw InputError("zero denominator in '" + whole + "'");
        return num / den;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw InputError("malformed number list '" + whole + "'");
    }
    return v;
}

template <class Fn>
void for_each_item(const std::string& text, Fn&& fn) {
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ',') {
            fn(std::string_view(text).substr(start, i - start));
            start = i + 1;
        }
    }
}

} // namespace

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for_each_item(text, [&](std::string_view item) {
        const auto dots = item.find("..");
        if (dots == std::string_view::npos) {
            out.push_back(to_int(item, text));
            return;
        }
        const int lo = to_int(item.substr(0, dots), text);
        const int hi = to_int(item.substr(dots + 2), text);
        if (hi < lo) throw InputError("empty range '" + std::string(item) + "'");
        if (hi - lo > 1'000'000) throw CapacityError("range '" + std::string(item) + "' is too long");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
    });
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for_each_item(text, [&](std::string_view item) { out.push_back(to_real(item, text)); });
    return out;
}

} // namespace bsa::app

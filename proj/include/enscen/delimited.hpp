#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enscen {

/// Splits one line on `delim`. Fields may be double-quoted; a quoted field
/// keeps embedded delimiters and turns "" into a literal quote. Multi-line
/// quoted fields are not supported (the readers are line-based).
std::vector<std::string> split_delimited(std::string_view line, char delim);

/// Header-mapped reader over a delimited text stream. The first line that is
/// neither blank nor a '#' comment is the header; blank and comment lines are
/// skipped throughout and never count as data rows.
class TableReader {
public:
    TableReader(std::istream& in, char delim);

    const std::vector<std::string>& header() const { return header_; }
    /// Column index by exact header name.
    std::optional<std::size_t> column(std::string_view name) const;

    /// Next data row; returns false at end of input.
    bool next_row(std::vector<std::string>& fields);

    /// 1-based index of the last row handed out, counting data rows only.
    std::size_t row_number() const { return row_; }

private:
    std::istream& in_;
    char delim_;
    std::vector<std::string> header_;
    std::size_t row_ = 0;
};

/// Strict numeric field parsers: the whole trimmed field must parse. A
/// decimal comma is accepted when it cannot be a field separator ambiguity
/// (the field is already split). Empty fields yield nullopt.
std::optional<double> parse_double_field(std::string_view field);
std::optional<long long> parse_int_field(std::string_view field);

std::string_view trim(std::string_view s);

}  // namespace enscen

#include "enscen/delimited.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace enscen {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_delimited(std::string_view line, char delim) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"' && current.empty()) {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

namespace {

bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

bool comment(const std::string& line) {
    const std::string_view t = trim(line);
    return !t.empty() && t.front() == '#';
}

}  // namespace

TableReader::TableReader(std::istream& in, char delim) : in_(in), delim_(delim) {
    std::string line;
    while (read_line(in_, line)) {
        if (blank(line) || comment(line)) continue;
        header_ = split_delimited(line, delim_);
        for (auto& h : header_) h = std::string(trim(h));
        break;
    }
}

std::optional<std::size_t> TableReader::column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return i;
    return std::nullopt;
}

bool TableReader::next_row(std::vector<std::string>& fields) {
    std::string line;
    while (read_line(in_, line)) {
        if (blank(line) || comment(line)) continue;
        fields = split_delimited(line, delim_);
        ++row_;
        return true;
    }
    return false;
}

std::optional<double> parse_double_field(std::string_view field) {
    std::string s{trim(field)};
    if (s.empty()) return std::nullopt;
    if (s.find(',') != std::string::npos && s.find('.') == std::string::npos)
        std::replace(s.begin(), s.end(), ',', '.');
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size()) return std::nullopt;
    return v;
}

std::optional<long long> parse_int_field(std::string_view field) {
    const std::string_view s = trim(field);
    if (s.empty()) return std::nullopt;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace enscen

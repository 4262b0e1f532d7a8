#include "forge/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace forge::csv {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current.push_back(ch);
            }
        } else if (ch == '"' && trim(current).empty()) {
            current.clear();
            in_quotes = true;
            was_quoted = true;
        } else if (ch == ',') {
            fields.push_back(was_quoted ? current : std::string(trim(current)));
            current.clear();
            was_quoted = false;
        } else {
            current.push_back(ch);
        }
    }
    fields.push_back(was_quoted ? current : std::string(trim(current)));
    return fields;
}

std::string quote_if_needed(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += quote_if_needed(fields[i]);
    }
    return out;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view token) {
    token = trim(token);
    if (token.empty()) return std::nullopt;
    if (token == "inf" || token == "+inf") return std::numeric_limits<double>::infinity();
    if (token == "-inf") return -std::numeric_limits<double>::infinity();
    if (token == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

std::optional<long> parse_int(std::string_view token) {
    token = trim(token);
    long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

bool LineReader::next(std::string& line) {
    while (std::getline(in_, line)) {
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        return true;
    }
    return false;
}

void write_matrix(std::ostream& out, const Matrix& m, std::string_view corner) {
    std::vector<std::string> header{std::string(corner)};
    header.insert(header.end(), m.col_labels().begin(), m.col_labels().end());
    out << join(header) << '\n';
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        out << quote_if_needed(m.row_labels()[r]);
        for (double v : m.row(r)) out << ',' << format_double(v);
        out << '\n';
    }
}

Matrix read_matrix(std::istream& in) {
    LineReader reader(in);
    std::string line;
    if (!reader.next(line)) return {};
    auto header = split_line(line);
    std::vector<std::string> cols(header.begin() + 1, header.end());
    std::vector<std::string> rows;
    std::vector<double> data;
    while (reader.next(line)) {
        auto fields = split_line(line);
        if (fields.size() != header.size())
            throw ForgeError(ErrorKind::Parse,
                             "line " + std::to_string(reader.line_number()) + ": expected " +
                                 std::to_string(header.size()) + " fields",
                             reader.line_number());
        rows.push_back(fields[0]);
        for (std::size_t j = 1; j < fields.size(); ++j) {
            auto v = parse_double(fields[j]);
            if (!v)
                throw ForgeError(ErrorKind::Parse,
                                 "line " + std::to_string(reader.line_number()) + ": bad number '" + fields[j] + "'",
                                 reader.line_number());
            data.push_back(*v);
        }
    }
    return Matrix(std::move(rows), std::move(cols), std::move(data));
}

Matrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ForgeError(ErrorKind::Io, "cannot open " + path.string());
    return read_matrix(in);
}

} // namespace forge::csv

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/labeled_matrix.hpp"

namespace forge::csv {

// Splits one CSV line into fields. Double-quoted fields may contain commas and
// doubled quotes. Surrounding whitespace of unquoted fields is trimmed.
std::vector<std::string> split_line(std::string_view line);

std::string quote_if_needed(std::string_view field);
std::string join(const std::vector<std::string>& fields);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

// Strict parse: the whole token must be consumed. Accepts "inf"/"nan".
std::optional<double> parse_double(std::string_view token);
std::optional<long> parse_int(std::string_view token);

std::string_view trim(std::string_view s);

// Line reader that skips blank lines and '#' metadata/comment lines while
// keeping track of the physical line number.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next data line; false at end of input.
    bool next(std::string& line);
    std::size_t line_number() const noexcept { return line_no_; }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

// Matrix layout: header row "<corner>,<col labels...>", then one row per
// row label. Used for RCA and specialization matrices.
void write_matrix(std::ostream& out, const Matrix& m, std::string_view corner = "country");
Matrix read_matrix(std::istream& in);
Matrix read_matrix(const std::filesystem::path& path);

} // namespace forge::csv

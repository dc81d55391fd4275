#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "crcs/types.hpp"

namespace crcs {

// Malformed input; line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Locale-independent number parsing. Throws ParseError(line) on garbage.
double parse_double(std::string_view text, std::size_t line = 0);
long long parse_integer(std::string_view text, std::size_t line = 0);

// Shortest decimal rendering at 12 significant digits, "C" locale.
std::string format_number(double x);
// x rounded to 12 significant digits (what format_number prints).
double round_significant(double x);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

// `time,status` CSV with a header line.
std::vector<Observation> read_observations_csv(std::istream& in);
std::vector<Observation> read_observations_csv_file(const std::string& path);
void write_observations_csv(std::ostream& out, const std::vector<Observation>& obs);

// One interval per line: `lower,upper,representative,closure` with closure in
// {oo,oc,co,cc}. Blank lines, `#` comments and a `lower,...` header are skipped.
GroupingScheme read_grouping_scheme(std::istream& in);
GroupingScheme read_grouping_scheme_file(const std::string& path);
void write_grouping_scheme(std::ostream& out, const GroupingScheme& scheme);

}  // namespace crcs

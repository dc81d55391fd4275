#include "crcs/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

namespace crcs {

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(std::string_view text, std::size_t line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, "not a number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line, "non-finite value: '" + std::string(text) + "'");
  return value;
}

long long parse_integer(std::string_view text, std::size_t line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  long long value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::string format_number(double x) {
  if (x == 0.0) return "0";  // no "-0"
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  (void)ec;
  return std::string(buf, ptr);
}

double round_significant(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  const std::string s = format_number(x);
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

std::vector<Observation> read_observations_csv(std::istream& in) {
  std::vector<Observation> out;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    const auto fields = split(text, ',');
    if (!header_seen) {
      if (fields.size() != 2 || trim(fields[0]) != "time" || trim(fields[1]) != "status") {
        throw ParseError(line, "expected header 'time,status'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 2) throw ParseError(line, "expected 2 fields, got " + std::to_string(fields.size()));
    Observation obs;
    obs.time = parse_double(fields[0], line);
    const long long status = parse_integer(fields[1], line);
    if (status < 0 || status > 1'000'000) throw ParseError(line, "invalid cause label");
    obs.status = static_cast<int>(status);
    out.push_back(obs);
  }
  if (!header_seen) throw ParseError(0, "empty observation file");
  return out;
}

std::vector<Observation> read_observations_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_observations_csv(in);
}

void write_observations_csv(std::ostream& out, const std::vector<Observation>& obs) {
  out << "time,status\n";
  for (const auto& o : obs) out << format_number(o.time) << ',' << o.status << '\n';
}

GroupingScheme read_grouping_scheme(std::istream& in) {
  std::vector<Interval> intervals;
  std::vector<double> reps;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    if (intervals.empty() && text.starts_with("lower")) continue;
    const auto fields = split(text, ',');
    if (fields.size() != 4) throw ParseError(line, "expected lower,upper,representative,closure");
    Interval iv;
    iv.lower = parse_double(fields[0], line);
    iv.upper = parse_double(fields[1], line);
    const double rep = parse_double(fields[2], line);
    try {
      iv.closure = parse_closure(trim(fields[3]));
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
    intervals.push_back(iv);
    reps.push_back(rep);
  }
  try {
    return GroupingScheme(std::move(intervals), std::move(reps));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
}

GroupingScheme read_grouping_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_grouping_scheme(in);
}

void write_grouping_scheme(std::ostream& out, const GroupingScheme& scheme) {
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    const Interval& iv = scheme.intervals()[i];
    out << format_number(iv.lower) << ',' << format_number(iv.upper) << ','
        << format_number(scheme.representatives()[i]) << ',' << to_string(iv.closure) << '\n';
  }
}

}  // namespace crcs

#include "cli/ranges.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace qbs::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_factor(std::string_view f, std::string_view whole) {
  f = trim(f);
  if (f == "pi") return std::numbers::pi;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc() || ptr != f.data() + f.size())
    throw ConfigError("cannot parse number '" + std::string(whole) + "'");
  return v;
}

}  // namespace

double parse_scalar(std::string_view text) {
  std::string_view s = trim(text);
  double sign = 1.0;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    // keep "-1e-3" on the from_chars path; only peel the sign before pi
    if (s.size() > 1 && s[1] == 'p') {
      sign = s.front() == '-' ? -1.0 : 1.0;
      s.remove_prefix(1);
    }
  }
  if (s.empty()) throw ConfigError("empty number");
  double value = 1.0;
  char op = '*';
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find_first_of("*/", pos);
    const double f = parse_factor(s.substr(pos, next == std::string_view::npos ? s.npos : next - pos), text);
    if (op == '*') {
      value *= f;
    } else {
      if (f == 0.0) throw ConfigError("division by zero in '" + std::string(text) + "'");
      value /= f;
    }
    if (next == std::string_view::npos) break;
    op = s[next];
    pos = next + 1;
  }
  if (!std::isfinite(value)) throw ConfigError("non-finite value '" + std::string(text) + "'");
  return sign * value;
}

std::vector<double> Range::values() const {
  std::vector<double> v;
  v.reserve(count);
  if (count == 1) {
    v.push_back(start);
    return v;
  }
  for (long i = 0; i < count; ++i)
    v.push_back(i == count - 1 ? end : start + (end - start) * static_cast<double>(i) / (count - 1));
  return v;
}

Range parse_range(std::string_view text) {
  const std::size_t a = text.find(':');
  if (a == std::string_view::npos) {
    const double x = parse_scalar(text);
    return {x, x, 1};
  }
  const std::size_t b = text.find(':', a + 1);
  if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos)
    throw ConfigError("range must be start:end:count, got '" + std::string(text) + "'");
  Range r;
  r.start = parse_scalar(text.substr(0, a));
  r.end = parse_scalar(text.substr(a + 1, b - a - 1));
  const std::string_view cnt = trim(text.substr(b + 1));
  const auto [ptr, ec] = std::from_chars(cnt.data(), cnt.data() + cnt.size(), r.count);
  if (cnt.empty() || ec != std::errc() || ptr != cnt.data() + cnt.size() || r.count < 1)
    throw ConfigError("range count must be a positive integer in '" + std::string(text) + "'");
  if (r.count > 1 && !(r.end > r.start))
    throw ConfigError("range must be increasing: '" + std::string(text) + "'");
  return r;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(',', pos);
    out.push_back(parse_scalar(text.substr(pos, next == std::string_view::npos ? text.npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace qbs::cli

#include "layergreen_cli/parse.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "layergreen/error.hpp"

namespace layergreen::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw DomainError("empty number");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw DomainError("not a number: '" + t + "'");
  return v;
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  if (const auto caret = t.find('^'); caret != std::string::npos) {
    return std::pow(parse_plain(t.substr(0, caret)), parse_plain(t.substr(caret + 1)));
  }
  if (const auto slash = t.find('/'); slash != std::string::npos) {
    const double den = parse_plain(t.substr(slash + 1));
    if (den == 0.0) throw DomainError("division by zero in '" + t + "'");
    return parse_plain(t.substr(0, slash)) / den;
  }
  return parse_plain(t);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_eps_list(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return parse_list(text);
  const std::string a = trim(text.substr(0, dots));
  const std::string b = trim(text.substr(dots + 2));
  if (a.rfind("2^", 0) != 0 || b.rfind("2^", 0) != 0) {
    throw DomainError("ranges must have the form 2^-a..2^-b");
  }
  const double ea = parse_plain(a.substr(2));
  const double eb = parse_plain(b.substr(2));
  if (ea != std::round(ea) || eb != std::round(eb)) throw DomainError("range exponents must be integers");
  std::vector<double> out;
  const int step = eb >= ea ? 1 : -1;
  for (int k = static_cast<int>(ea);; k += step) {
    out.push_back(std::ldexp(1.0, k));
    if (k == static_cast<int>(eb)) break;
  }
  return out;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string join_numbers(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_number(v[i]);
  }
  return s;
}

}  // namespace layergreen::cli

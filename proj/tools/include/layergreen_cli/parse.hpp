#pragma once

#include <string>
#include <vector>

namespace layergreen::cli {

/// Accepts decimals, fractions "a/b" and powers "2^-k".  Throws DomainError.
double parse_number(const std::string& text);

/// Comma-separated numbers.
std::vector<double> parse_list(const std::string& text);

/// Comma-separated numbers or an octave range "2^-a..2^-b" (both ends included).
std::vector<double> parse_eps_list(const std::string& text);

/// Shortest text that reads back to the same double ("%.17g" trimmed).
std::string format_number(double v);

std::string join_numbers(const std::vector<double>& v);

}  // namespace layergreen::cli

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "pkahler/nilmanifold.hpp"

namespace pkahler {

// Text formats, whitespace-insensitive except inside the name.
//
// Spec file:
//   name: eta_beta 3
//   dimension: 7
//   d phi7 = 1 phi1^phi2 + 1 phi3^phi4 + 1 phi5^phi6
// (omitted structure lines are zero; '#' starts a comment)
//
// Form file:
//   dimension: 3
//   1/4 phi1^phi2^bar1^bar2
//   1/2 + 3/4 i phi1^bar3
// (every remaining line is an expression; the lines are summed)
//
// Coefficients are Gaussian-rational literals "a/b + c/d i", "-i", "3 i", "2"; a literal
// with both parts binds greedily, so "1 + 2 i phi1" is (1 + 2i) phi1.

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
};

GaussianRational parse_gaussian(std::string_view text);

// Sum of terms "<coeff> f1^f2^..." with factors phi<k> / bar<k> in any order; "0" is zero.
Form parse_expression(std::string_view text, int n);
// Canonical single-line rendering: terms by degree, holomorphic degree descending, then
// lexicographic; " - " before terms whose leading part is negative.
std::string format_expression(const Form& f);

ManifoldSpec parse_spec(std::string_view text);
std::string print_spec(const ManifoldSpec& spec);

Form parse_form_file(std::string_view text);
std::string print_form_file(const Form& f);

std::string read_file(const std::string& path);
// Catalog name ("iwasawa", "eta_beta 2", ...) or a spec file path.
ManifoldSpec load_spec(const std::string& name_or_path);

}  // namespace pkahler

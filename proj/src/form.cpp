#include "pkahler/form.hpp"

#include <algorithm>
#include <cmath>

namespace pkahler {

double max_abs(const FormF& f) {
  double m = 0;
  for (const auto& [k, c] : f.terms()) m = std::max(m, std::abs(c));
  return m;
}

bool near_zero(const FormF& f, double tol) { return max_abs(f) <= tol; }

double distance(const FormF& a, const FormF& b) { return max_abs(a - b); }

}  // namespace pkahler

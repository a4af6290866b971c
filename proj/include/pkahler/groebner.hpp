#pragma once

#include <map>
#include <vector>

#include "pkahler/scalar.hpp"

namespace pkahler::groebner {

using Monomial = std::vector<int>;  // exponent vector

// Graded reverse lexicographic order, as a "greater first" comparator.
struct GrevlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

struct Poly {
  std::map<Monomial, GaussianRational, GrevlexGreater> terms;
  bool is_zero() const { return terms.empty(); }
  const Monomial& lead() const { return terms.begin()->first; }
};

// Buchberger's algorithm with the coprime-leads criterion. Throws when more than
// max_pairs S-polynomials would be needed.
std::vector<Poly> groebner_basis(std::vector<Poly> gens, int nvars, long max_pairs = 200000);

// True iff the homogeneous polynomials have no common zero in projective space over
// the algebraic closure: every variable has a pure power among the leading monomials.
bool projective_variety_empty(const std::vector<Poly>& homogeneous, int nvars);

}  // namespace pkahler::groebner

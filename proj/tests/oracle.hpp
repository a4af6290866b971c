#pragma once
// Reference implementations used only by tests. Forms are stored as words in the
// generators 1..n (phi_i) and n+1..2n (bar_i); signs come from sorting the word.

#include <map>
#include <random>
#include <vector>

#include "pkahler/form.hpp"

namespace oracle {

using pkahler::Form;
using pkahler::GaussianRational;
using Word = std::vector<int>;
using WordForm = std::map<Word, GaussianRational>;

// Sorts w in place, returning the permutation sign or 0 on a repeated generator.
inline int sort_sign(Word& w) {
  int sign = 1;
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = 0; b + 1 < w.size() - a; ++b)
      if (w[b] > w[b + 1]) {
        std::swap(w[b], w[b + 1]);
        sign = -sign;
      } else if (w[b] == w[b + 1]) {
        return 0;
      }
  for (std::size_t a = 1; a < w.size(); ++a)
    if (w[a] == w[a - 1]) return 0;
  return sign;
}

inline void add(WordForm& f, Word w, const GaussianRational& c) {
  int s = sort_sign(w);
  if (!s || c.is_zero()) return;
  auto& slot = f[w];
  slot += s > 0 ? c : -c;
  if (slot.is_zero()) f.erase(w);
}

inline WordForm from_form(const Form& f) {
  const int n = f.dim();
  WordForm out;
  for (const auto& [k, c] : f.terms()) {
    Word w;
    for (int i : pkahler::indices(k.first)) w.push_back(i);
    for (int j : pkahler::indices(k.second)) w.push_back(n + j);
    add(out, w, c);
  }
  return out;
}

inline Form to_form(const WordForm& f, int n) {
  Form out(n);
  for (const auto& [w, c] : f) {
    pkahler::Mask I = 0, J = 0;
    for (int g : w) {
      if (g <= n)
        I |= pkahler::bit(g);
      else
        J |= pkahler::bit(g - n);
    }
    out.add(I, J, c);
  }
  return out;
}

inline Form wedge(const Form& a, const Form& b) {
  const int n = a.dim();
  auto wa = from_form(a), wb = from_form(b);
  WordForm out;
  for (const auto& [x, cx] : wa)
    for (const auto& [y, cy] : wb) {
      Word w = x;
      w.insert(w.end(), y.begin(), y.end());
      add(out, w, cx * cy);
    }
  return to_form(out, n);
}

// Conjugation swaps phi_i and bar_i letter by letter, then re-sorts.
inline Form conjugate(const Form& a) {
  const int n = a.dim();
  WordForm out;
  for (const auto& [w, c] : from_form(a)) {
    Word v;
    for (int g : w) v.push_back(g <= n ? g + n : g - n);
    add(out, v, c.conj());
  }
  return to_form(out, n);
}

inline GaussianRational small_scalar(std::mt19937_64& rng, bool complex = true) {
  std::uniform_int_distribution<int> d(-3, 3);
  return complex ? GaussianRational(d(rng), d(rng)) : GaussianRational(d(rng));
}

// Random form of bidegree (a,b) with a few terms.
inline Form random_form(std::mt19937_64& rng, int n, int a, int b, int terms = 4) {
  Form f(n);
  const auto& I = pkahler::subsets(n, a);
  const auto& J = pkahler::subsets(n, b);
  if (I.empty() || J.empty()) return f;
  std::uniform_int_distribution<std::size_t> di(0, I.size() - 1), dj(0, J.size() - 1);
  for (int t = 0; t < terms; ++t) f.add(I[di(rng)], J[dj(rng)], small_scalar(rng));
  return f;
}

inline Form random_real_pp(std::mt19937_64& rng, int n, int p, int terms = 4) {
  Form f = random_form(rng, n, p, p, terms);
  return f + oracle::conjugate(f);
}

}  // namespace oracle

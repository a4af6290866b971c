#include "pkahler/groebner.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace pkahler::groebner {

bool GrevlexGreater::operator()(const Monomial& a, const Monomial& b) const {
  int da = std::accumulate(a.begin(), a.end(), 0), db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da > db;
  // smaller exponent in the last differing variable wins
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

namespace {

bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::max(a[i], b[i]);
  return m;
}

Monomial quotient(const Monomial& a, const Monomial& b) {
  Monomial m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = a[i] - b[i];
  return m;
}

bool coprime(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

void add_term(Poly& p, const Monomial& m, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, ins] = p.terms.try_emplace(m, c);
  if (!ins) {
    it->second += c;
    if (it->second.is_zero()) p.terms.erase(it);
  }
}

// p - c * x^m * q
void sub_scaled(Poly& p, const GaussianRational& c, const Monomial& m, const Poly& q) {
  for (const auto& [mq, cq] : q.terms) {
    Monomial prod(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) prod[i] = m[i] + mq[i];
    add_term(p, prod, -(c * cq));
  }
}

void make_monic(Poly& p) {
  if (p.is_zero()) return;
  GaussianRational inv = GaussianRational(1) / p.terms.begin()->second;
  for (auto& [m, c] : p.terms) c *= inv;
}

Poly reduce(Poly p, const std::vector<Poly>& basis) {
  Poly rem;
  while (!p.is_zero()) {
    const auto& [m, c] = *p.terms.begin();
    bool reduced = false;
    for (const auto& g : basis) {
      if (g.is_zero() || !divides(g.lead(), m)) continue;
      GaussianRational f = c / g.terms.begin()->second;
      Monomial q = quotient(m, g.lead());
      sub_scaled(p, f, q, g);
      reduced = true;
      break;
    }
    if (!reduced) {
      add_term(rem, m, c);
      p.terms.erase(p.terms.begin());
    }
  }
  return rem;
}

Poly s_poly(const Poly& f, const Poly& g) {
  Monomial l = lcm(f.lead(), g.lead());
  Poly s;
  sub_scaled(s, GaussianRational(-1) / f.terms.begin()->second, quotient(l, f.lead()), f);
  sub_scaled(s, GaussianRational(1) / g.terms.begin()->second, quotient(l, g.lead()), g);
  return s;
}

}  // namespace

std::vector<Poly> groebner_basis(std::vector<Poly> gens, int nvars, long max_pairs) {
  std::vector<Poly> G;
  for (auto& g : gens) {
    for (const auto& [m, c] : g.terms)
      if (static_cast<int>(m.size()) != nvars) throw std::invalid_argument("monomial arity mismatch");
    Poly r = reduce(g, G);
    if (r.is_zero()) continue;
    make_monic(r);
    G.push_back(r);
  }
  std::deque<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = i + 1; j < G.size(); ++j) pairs.emplace_back(i, j);
  long processed = 0;
  while (!pairs.empty()) {
    if (++processed > max_pairs) throw std::runtime_error("Groebner basis budget exhausted");
    auto [i, j] = pairs.front();
    pairs.pop_front();
    if (coprime(G[i].lead(), G[j].lead())) continue;
    Poly r = reduce(s_poly(G[i], G[j]), G);
    if (r.is_zero()) continue;
    make_monic(r);
    G.push_back(r);
    for (std::size_t a = 0; a + 1 < G.size(); ++a) pairs.emplace_back(a, G.size() - 1);
  }
  return G;
}

bool projective_variety_empty(const std::vector<Poly>& homogeneous, int nvars) {
  auto G = groebner_basis(homogeneous, nvars);
  for (int v = 0; v < nvars; ++v) {
    bool found = false;
    for (const auto& g : G) {
      const auto& m = g.lead();
      bool pure = m[v] > 0;
      for (int w = 0; w < nvars && pure; ++w)
        if (w != v && m[w] != 0) pure = false;
      if (pure) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace pkahler::groebner

#include "pkahler/exterior.hpp"

namespace pkahler {

namespace {

int holomorphic_degree(const Form& eta) {
  int p = -1;
  for (const auto& [k, c] : eta.terms()) {
    if (k.second != 0) throw std::invalid_argument("expected a (p,0)-form");
    int d = degree(k.first);
    if (p >= 0 && d != p) throw std::invalid_argument("expected a form of pure degree");
    p = d;
  }
  return p;
}

// Row K of the contraction matrix: coefficient of phi_i in i_{e_K} eta, where
// i_{e_K} contracts k_1 first.
std::vector<std::vector<GaussianRational>> contraction_matrix(const Form& eta, int p) {
  const int n = eta.dim();
  std::vector<std::vector<GaussianRational>> m;
  for (Mask K : subsets(n, p - 1)) {
    std::vector<GaussianRational> row(n, GaussianRational(0));
    bool any = false;
    for (int i = 1; i <= n; ++i) {
      if (contains(K, i)) continue;
      auto c = eta.coefficient(K | bit(i), 0);
      if (c.is_zero()) continue;
      row[i - 1] = merge_sign(K, bit(i)) < 0 ? -c : c;
      any = true;
    }
    if (any) m.push_back(std::move(row));
  }
  return m;
}

}  // namespace

bool is_simple(const Form& eta) {
  if (eta.is_zero()) return true;
  int p = holomorphic_degree(eta);
  const int n = eta.dim();
  if (p <= 1 || p >= n - 1) return true;
  return dense_rank(contraction_matrix(eta, p)) == p;
}

bool plucker_relations_hold(const Form& eta) {
  if (eta.is_zero()) return true;
  int p = holomorphic_degree(eta);
  const int n = eta.dim();
  if (p <= 1) return true;
  for (Mask K : subsets(n, p - 1)) {
    Form c = eta;
    for (int k : indices(K)) c = contract(k, c);
    if (!wedge(c, eta).is_zero()) return false;
  }
  return true;
}

std::optional<std::vector<Form>> factorize(const Form& eta) {
  if (eta.is_zero()) return std::nullopt;
  int p = holomorphic_degree(eta);
  const int n = eta.dim();
  if (p == 0) return std::nullopt;
  std::vector<Form> factors;
  if (p == 1) {
    factors.push_back(eta);
    return factors;
  }
  if (!is_simple(eta)) return std::nullopt;
  // The row space of the contraction matrix is the span of the factors.
  Rref<GaussianRational> rr(n);
  for (auto& row : contraction_matrix(eta, p)) {
    SparseVec<GaussianRational> v;
    for (int i = 0; i < n; ++i)
      if (!row[i].is_zero()) v[i] = row[i];
    rr.insert(v);
  }
  if (rr.rank() != p) return std::nullopt;
  for (const auto& [pc, row] : rr.rows()) {
    Form f(n);
    for (const auto& [c, x] : row) f.add(bit(c + 1), 0, x);
    factors.push_back(f);
  }
  Form w = factors[0];
  for (int r = 1; r < p; ++r) w = wedge(w, factors[r]);
  const auto& [key, ce] = *eta.terms().begin();
  auto cw = w.coefficient(key.first, key.second);
  if (cw.is_zero()) return std::nullopt;
  factors[0] *= ce / cw;
  Form check = factors[0];
  for (int r = 1; r < p; ++r) check = wedge(check, factors[r]);
  if (check != eta) return std::nullopt;
  return factors;
}

}  // namespace pkahler

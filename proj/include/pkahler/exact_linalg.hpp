#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "pkahler/scalar.hpp"

namespace pkahler {

template <class F>
using SparseVec = std::map<int, F>;

template <class F>
void axpy(SparseVec<F>& y, const F& a, const SparseVec<F>& x) {
  for (const auto& [c, v] : x) {
    auto [it, inserted] = y.try_emplace(c, a * v);
    if (!inserted) {
      it->second += a * v;
      if (is_exact_zero(it->second)) y.erase(it);
    } else if (is_exact_zero(it->second)) {
      y.erase(it);
    }
  }
}

// Incrementally maintained reduced row echelon form. Pivots are only taken in
// columns < pivot_limit; columns beyond it act as bookkeeping (e.g. which input
// rows were combined).
template <class F>
class Rref {
 public:
  explicit Rref(int ncols, int pivot_limit = -1)
      : ncols_(ncols), limit_(pivot_limit < 0 ? ncols : pivot_limit) {}

  int ncols() const { return ncols_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::map<int, SparseVec<F>>& rows() const { return rows_; }

  // Reduce v against current pivots (no insertion).
  SparseVec<F> reduce(SparseVec<F> v) const {
    std::vector<int> hits;
    for (const auto& [c, x] : v) {
      if (c >= limit_) break;
      if (rows_.count(c)) hits.push_back(c);
    }
    for (int c : hits) {
      auto it = v.find(c);
      if (it == v.end()) continue;
      F a = -it->second;
      axpy(v, a, rows_.at(c));
    }
    return v;
  }

  // Inserts v. Returns the new pivot column, or nullopt when v reduces to
  // something with no entry below pivot_limit; `residual` then holds what remains.
  std::optional<int> insert(SparseVec<F> v, SparseVec<F>* residual = nullptr) {
    v = reduce(std::move(v));
    auto lead = v.begin();
    if (lead == v.end() || lead->first >= limit_) {
      if (residual) *residual = std::move(v);
      return std::nullopt;
    }
    int pc = lead->first;
    F inv = F(1) / lead->second;
    for (auto& [c, x] : v) x *= inv;
    for (auto& [c, row] : rows_) {
      auto it = row.find(pc);
      if (it == row.end()) continue;
      F a = -it->second;
      axpy(row, a, v);
    }
    rows_.emplace(pc, std::move(v));
    return pc;
  }

  bool in_span(const SparseVec<F>& v) const {
    auto r = reduce(v);
    return r.empty() || r.begin()->first >= limit_;
  }

  // Basis of {x : M x = 0} restricted to the first pivot_limit columns.
  std::vector<SparseVec<F>> nullspace() const {
    std::vector<SparseVec<F>> out;
    for (int f = 0; f < limit_; ++f) {
      if (rows_.count(f)) continue;
      SparseVec<F> x;
      x[f] = F(1);
      for (const auto& [pc, row] : rows_) {
        auto it = row.find(f);
        if (it != row.end()) x[pc] = -it->second;
      }
      out.push_back(std::move(x));
    }
    return out;
  }

  // Some x with M x = b when the system was built with b stored in column `rhs_col`
  // (augmented matrix); nullopt when inconsistent.
  std::optional<SparseVec<F>> particular(int rhs_col) const {
    SparseVec<F> x;
    for (const auto& [pc, row] : rows_) {
      if (pc == rhs_col) return std::nullopt;
      auto it = row.find(rhs_col);
      if (it != row.end()) x[pc] = it->second;
    }
    return x;
  }

 private:
  int ncols_;
  int limit_;
  std::map<int, SparseVec<F>> rows_;
};

// Nullspace of the system given by rows over ncols unknowns.
template <class F>
std::vector<SparseVec<F>> nullspace(const std::vector<SparseVec<F>>& rows, int ncols) {
  Rref<F> r(ncols);
  for (const auto& row : rows) r.insert(row);
  return r.nullspace();
}

template <class F>
F determinant(std::vector<std::vector<F>> a) {
  const std::size_t n = a.size();
  F det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    if constexpr (std::is_same_v<F, Complex>) {
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
      if (a[p][c] == F(0)) return F(0);
    } else {
      while (p < n && is_exact_zero(a[p][c])) ++p;
      if (p == n) return F(0);
    }
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    F inv = F(1) / a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (is_exact_zero(a[r][c])) continue;
      F f = a[r][c] * inv;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

template <class F>
int dense_rank(std::vector<std::vector<F>> a) {
  if (a.empty()) return 0;
  const std::size_t m = a.size(), n = a[0].size();
  int rank = 0;
  for (std::size_t c = 0; c < n && static_cast<std::size_t>(rank) < m; ++c) {
    std::size_t p = rank;
    while (p < m && is_exact_zero(a[p][c])) ++p;
    if (p == m) continue;
    std::swap(a[p], a[rank]);
    F inv = F(1) / a[rank][c];
    for (std::size_t r = rank + 1; r < m; ++r) {
      if (is_exact_zero(a[r][c])) continue;
      F f = a[r][c] * inv;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace pkahler

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "pkahler/exact_linalg.hpp"
#include "pkahler/form.hpp"

namespace pkahler {

template <class S>
S sigma_as(int p) {
  if constexpr (std::is_same_v<S, Complex>)
    return sigma_f(p);
  else
    return sigma(p);
}

// dv = sigma_n phi_{1..n} ^ bar_{1..n}
template <class S>
BasicForm<S> volume_form(int n) {
  return BasicForm<S>::monomial(n, full_mask(n), full_mask(n), sigma_as<S>(n));
}

// f with omega ^ psi = f dv.
template <class S>
S volume_pairing(const BasicForm<S>& omega, const BasicForm<S>& psi) {
  const int n = omega.dim();
  for (const auto& [k, c] : omega.terms())
    for (const auto& [k2, c2] : psi.terms())
      if (degree(k.first) + degree(k2.first) != n || degree(k.second) + degree(k2.second) != n)
        throw std::invalid_argument("volume_pairing: degrees do not add up to the top degree");
  auto w = wedge(omega, psi);
  return w.coefficient(full_mask(n), full_mask(n)) / sigma_as<S>(n);
}

// A (p,p)-vector: coefficients on e_K ^ ebar_L.
template <class S>
struct BasicPPVector {
  int n = 0;
  int p = 0;
  std::map<std::pair<Mask, Mask>, S> coef;
};
using PPVector = BasicPPVector<GaussianRational>;
using PPVectorF = BasicPPVector<Complex>;

// Matrix with n rows (frame) and p columns (the vectors).
template <class S>
using Matrix = std::vector<std::vector<S>>;

// Pluecker coordinates P_K = det(V[K, :]) in lexicographic order of K.
template <class S>
std::vector<S> plucker(const Matrix<S>& V, int n, int p) {
  const auto& ks = subsets(n, p);
  std::vector<S> out;
  out.reserve(ks.size());
  for (Mask K : ks) {
    auto idx = indices(K);
    Matrix<S> m(p, std::vector<S>(p));
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < p; ++c) m[r][c] = V[idx[r] - 1][c];
    out.push_back(determinant(m));
  }
  return out;
}

// sigma_p^{-1} V ^ conj(V) for a simple V given by Pluecker coordinates.
template <class S>
BasicPPVector<S> strong_square(const std::vector<S>& P, int n, int p) {
  BasicPPVector<S> A{n, p, {}};
  const auto& ks = subsets(n, p);
  S inv = S(1) / sigma_as<S>(p);
  for (std::size_t a = 0; a < ks.size(); ++a) {
    if (is_exact_zero(P[a])) continue;
    for (std::size_t b = 0; b < ks.size(); ++b) {
      if (is_exact_zero(P[b])) continue;
      A.coef[{ks[a], ks[b]}] = inv * P[a] * conj(P[b]);
    }
  }
  return A;
}

// Omega(A) = sum Omega_{IJ} A_{IJ}
template <class S>
S evaluate(const BasicForm<S>& omega, const BasicPPVector<S>& A) {
  S out(0);
  for (const auto& [k, c] : A.coef) out += omega.coefficient(k.first, k.second) * c;
  return out;
}

// g(e_K ^ ebar_L) = sigma_n (-1)^{pk} eps(K,K^c) eps(L,L^c) phi_{K^c} ^ bar_{L^c}
template <class S>
BasicForm<S> g_isomorphism(const BasicPPVector<S>& A) {
  const int n = A.n, p = A.p, k = n - p;
  BasicForm<S> out(n);
  S sn = sigma_as<S>(n);
  for (const auto& [key, c] : A.coef) {
    Mask Kc = complement(key.first, n), Lc = complement(key.second, n);
    int s = merge_sign(key.first, Kc) * merge_sign(key.second, Lc);
    if ((p * k) & 1) s = -s;
    S v = sn * c;
    if (s < 0) v = -v;
    out.add(Kc, Lc, v);
  }
  return out;
}

// True iff eta (pure (p,0)) is zero or decomposable. Uses the rank of the space of
// (p-1)-fold contractions, which is p exactly for nonzero decomposable eta.
bool is_simple(const Form& eta);

// The Pluecker relations (i_{e_K} eta) ^ eta = 0 for all |K| = p-1, evaluated term by
// term. Equivalent to is_simple; kept separate as a slower cross-check.
bool plucker_relations_hold(const Form& eta);

// For simple nonzero eta, (1,0)-forms v_1..v_p with v_1 ^ ... ^ v_p = eta.
std::optional<std::vector<Form>> factorize(const Form& eta);

// (p,0)-form of degree p read off as a coefficient vector in lexicographic order.
template <class S>
std::vector<S> holomorphic_coords(const BasicForm<S>& eta, int p) {
  const auto& ks = subsets(eta.dim(), p);
  std::vector<S> v(ks.size(), S(0));
  for (std::size_t a = 0; a < ks.size(); ++a) v[a] = eta.coefficient(ks[a], 0);
  return v;
}

template <class S>
BasicForm<S> holomorphic_from_coords(int n, int p, const std::vector<S>& v) {
  const auto& ks = subsets(n, p);
  BasicForm<S> out(n);
  for (std::size_t a = 0; a < ks.size(); ++a) out.add(ks[a], 0, v[a]);
  return out;
}

// Pullback along L : C^m -> C^n given as an n x m matrix; phi_i -> sum_a L[i][a] phi'_a.
template <class S>
BasicForm<S> pullback(const Matrix<S>& L, int m, const BasicForm<S>& omega) {
  const int n = omega.dim();
  if (static_cast<int>(L.size()) != n) throw std::invalid_argument("pullback: row count differs from frame");
  for (const auto& row : L)
    if (static_cast<int>(row.size()) != m) throw std::invalid_argument("pullback: column count mismatch");
  auto image = [&](Mask I, bool bar) {
    BasicForm<S> out(m);
    auto idx = indices(I);
    const int d = static_cast<int>(idx.size());
    for (Mask A : subsets(m, d)) {
      auto a = indices(A);
      Matrix<S> sub(d, std::vector<S>(d));
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) sub[r][c] = L[idx[r] - 1][a[c] - 1];
      S det = determinant(sub);
      if (bar)
        out.add(0, A, conj(det));
      else
        out.add(A, 0, det);
    }
    return out;
  };
  BasicForm<S> out(m);
  for (const auto& [k, c] : omega.terms()) out += c * wedge(image(k.first, false), image(k.second, true));
  return out;
}

}  // namespace pkahler

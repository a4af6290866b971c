#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "pkahler/multi_index.hpp"
#include "pkahler/scalar.hpp"

namespace pkahler {

// Sum of c * phi_I ^ bar_J over a fixed n-frame, holomorphic factors written first.
template <class S>
class BasicForm {
 public:
  using Scalar = S;
  using Key = std::pair<Mask, Mask>;  // (holomorphic I, antiholomorphic J)
  using TermMap = std::map<Key, S>;

  BasicForm() = default;
  explicit BasicForm(int n) : n_(n) {
    if (n < 0 || n > kMaxDim) throw std::out_of_range("frame dimension out of range");
  }

  static BasicForm monomial(int n, Mask I, Mask J, const S& c = S(1)) {
    BasicForm f(n);
    f.add(I, J, c);
    return f;
  }
  static BasicForm constant(int n, const S& c) { return monomial(n, 0, 0, c); }
  static BasicForm phi(int n, int i) { return monomial(n, bit(i), 0); }
  static BasicForm phibar(int n, int i) { return monomial(n, 0, bit(i)); }

  int dim() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(Mask I, Mask J, const S& c) {
    if ((I | J) & ~full_mask(n_)) throw std::out_of_range("multi-index outside frame");
    if (is_exact_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(Key{I, J}, c);
    if (!inserted) {
      it->second += c;
      if (is_exact_zero(it->second)) terms_.erase(it);
    }
  }

  S coefficient(Mask I, Mask J) const {
    auto it = terms_.find(Key{I, J});
    return it == terms_.end() ? S(0) : it->second;
  }

  BasicForm component(int a, int b) const {
    BasicForm out(n_);
    for (const auto& [k, c] : terms_)
      if (degree(k.first) == a && degree(k.second) == b) out.terms_.emplace(k, c);
    return out;
  }

  std::set<std::pair<int, int>> bidegrees() const {
    std::set<std::pair<int, int>> out;
    for (const auto& [k, c] : terms_) out.emplace(degree(k.first), degree(k.second));
    return out;
  }

  bool is_pure(int a, int b) const {
    for (const auto& [k, c] : terms_)
      if (degree(k.first) != a || degree(k.second) != b) return false;
    return true;
  }

  BasicForm& operator+=(const BasicForm& o) {
    check_frame(o);
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
    return *this;
  }
  BasicForm& operator-=(const BasicForm& o) {
    check_frame(o);
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, -c);
    return *this;
  }
  BasicForm& operator*=(const S& s) {
    if (is_exact_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
  friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
  friend BasicForm operator*(const S& s, BasicForm a) { return a *= s; }
  friend BasicForm operator*(BasicForm a, const S& s) { return a *= s; }
  BasicForm operator-() const {
    BasicForm out = *this;
    for (auto& [k, c] : out.terms_) c = -c;
    return out;
  }

  friend bool operator==(const BasicForm& a, const BasicForm& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const BasicForm& a, const BasicForm& b) { return !(a == b); }

  void check_frame(const BasicForm& o) const {
    if (o.n_ != n_) throw std::invalid_argument("frame dimension mismatch");
  }

 private:
  int n_ = 0;
  TermMap terms_;
};

using Form = BasicForm<GaussianRational>;
using FormF = BasicForm<Complex>;

template <class S>
BasicForm<S> wedge(const BasicForm<S>& a, const BasicForm<S>& b) {
  a.check_frame(b);
  BasicForm<S> out(a.dim());
  for (const auto& [ka, ca] : a.terms()) {
    const int ja = degree(ka.second);
    for (const auto& [kb, cb] : b.terms()) {
      int s1 = merge_sign(ka.first, kb.first);
      if (!s1) continue;
      int s2 = merge_sign(ka.second, kb.second);
      if (!s2) continue;
      int s = s1 * s2;
      if ((ja * degree(kb.first)) & 1) s = -s;
      S c = ca * cb;
      if (s < 0) c = -c;
      out.add(ka.first | kb.first, ka.second | kb.second, c);
    }
  }
  return out;
}

template <class S, class... Rest>
BasicForm<S> wedge(const BasicForm<S>& a, const BasicForm<S>& b, const Rest&... rest) {
  return wedge(wedge(a, b), rest...);
}

// (I, J, c) -> (J, I, conj(c) (-1)^{|I||J|})
template <class S>
BasicForm<S> conjugate(const BasicForm<S>& a) {
  BasicForm<S> out(a.dim());
  for (const auto& [k, c] : a.terms()) {
    S cc = conj(c);
    if ((degree(k.first) * degree(k.second)) & 1) cc = -cc;
    out.add(k.second, k.first, cc);
  }
  return out;
}

template <class S>
bool is_real(const BasicForm<S>& a) {
  return conjugate(a) == a;
}

// Interior product by the frame vector e_i, acting on holomorphic factors.
template <class S>
BasicForm<S> contract(int i, const BasicForm<S>& eta) {
  BasicForm<S> out(eta.dim());
  for (const auto& [k, c] : eta.terms()) {
    if (!contains(k.first, i)) continue;
    S cc = c;
    if (rank_below(k.first, i) & 1) cc = -cc;
    out.add(k.first & ~bit(i), k.second, cc);
  }
  return out;
}

template <class S>
BasicForm<S> wedge_power(const BasicForm<S>& a, int k) {
  BasicForm<S> out = BasicForm<S>::constant(a.dim(), S(1));
  for (int r = 0; r < k; ++r) out = wedge(out, a);
  return out;
}

inline FormF to_float(const Form& f) {
  FormF out(f.dim());
  for (const auto& [k, c] : f.terms()) out.add(k.first, k.second, c.to_complex());
  return out;
}

// Largest coefficient modulus, 0 for the zero form.
double max_abs(const FormF& f);
// Every coefficient within tol of zero.
bool near_zero(const FormF& f, double tol = 1e-9);
// Largest coefficient modulus of a - b.
double distance(const FormF& a, const FormF& b);

// Shift all indices by `offset` and re-embed into an n-frame.
template <class S>
BasicForm<S> shift_frame(const BasicForm<S>& f, int offset, int n) {
  BasicForm<S> out(n);
  for (const auto& [k, c] : f.terms()) out.add(k.first << offset, k.second << offset, c);
  return out;
}

}  // namespace pkahler

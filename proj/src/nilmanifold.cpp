#include "pkahler/nilmanifold.hpp"

#include <random>
#include <sstream>

#include "pkahler/groebner.hpp"

namespace pkahler {

namespace {

std::string term_text(Mask I, Mask J, const GaussianRational& c) {
  std::ostringstream os;
  os << "(" << c << ")";
  for (int i : indices(I)) os << " phi" << i;
  for (int j : indices(J)) os << " bar" << j;
  return os.str();
}

}  // namespace

bool is_parallelizable(const ManifoldSpec& spec) {
  for (const auto& f : spec.d_phi)
    for (const auto& [k, c] : f.terms())
      if (k.second != 0) return false;
  return true;
}

bool has_rational_structure(const ManifoldSpec& spec) {
  for (const auto& f : spec.d_phi)
    for (const auto& [k, c] : f.terms())
      if (!c.is_real()) return false;
  return true;
}

ValidationReport validate(const ManifoldSpec& spec) {
  ValidationReport r;
  if (spec.n < 1 || spec.n > kMaxDim) r.violations.push_back("dimension must lie in 1.." + std::to_string(kMaxDim));
  if (static_cast<int>(spec.d_phi.size()) != spec.n)
    r.violations.push_back("expected " + std::to_string(spec.n) + " structure equations, got " +
                           std::to_string(spec.d_phi.size()));
  if (!r.violations.empty()) return r;
  for (int k = 1; k <= spec.n; ++k) {
    const Form& f = spec.d_phi[k - 1];
    if (f.dim() != spec.n) {
      r.violations.push_back("d phi" + std::to_string(k) + " lives in a frame of dimension " + std::to_string(f.dim()));
      continue;
    }
    for (const auto& [key, c] : f.terms()) {
      int a = degree(key.first), b = degree(key.second);
      if (a + b != 2)
        r.violations.push_back("d phi" + std::to_string(k) + " has a term of degree " + std::to_string(a + b) + ": " +
                               term_text(key.first, key.second, c));
      else if (a == 0)
        r.violations.push_back("d phi" + std::to_string(k) + " has a (0,2) term " + term_text(key.first, key.second, c));
    }
  }
  if (!r.violations.empty()) return r;
  Calculus calc(spec);
  for (int k = 1; k <= spec.n; ++k) {
    for (bool bar : {false, true}) {
      Form g = bar ? Form::phibar(spec.n, k) : Form::phi(spec.n, k);
      Form dd = calc.d(calc.d(g));
      for (const auto& [key, c] : dd.terms())
        r.violations.push_back(std::string("d^2 ") + (bar ? "bar" : "phi") + std::to_string(k) +
                               " != 0: coefficient " + term_text(key.first, key.second, c));
    }
  }
  r.valid = r.violations.empty();
  r.parallelizable = is_parallelizable(spec);
  r.rational_structure = has_rational_structure(spec);
  return r;
}

Calculus::Calculus(const ManifoldSpec& spec) : n_(spec.n) {
  if (static_cast<int>(spec.d_phi.size()) != n_) throw std::invalid_argument("structure equation count mismatch");
  for (const auto& f : spec.d_phi) {
    if (f.dim() != n_) throw std::invalid_argument("structure equation in a different frame");
    dphi_.push_back(f);
    dphibar_.push_back(conjugate(f));
  }
}

Form Calculus::apply(Op op, const Form& f) const {
  if (f.dim() != n_) throw std::invalid_argument("form frame does not match the spec");
  Form out(n_);
  for (const auto& [key, c] : f.terms()) {
    const Mask I = key.first, J = key.second;
    const int a = degree(I);
    // generators in order: phi_i (i in I), then bar_j (j in J)
    int pos = 0;
    auto expand = [&](const Form& dg, Mask restI, Mask restJ, int position) {
      // (-1)^position dg ^ (monomial without the generator); dg has even degree
      for (const auto& [k2, c2] : dg.terms()) {
        const int outa = degree(k2.first) + degree(restI);
        if (op == Op::Del && outa != a + 1) continue;
        if (op == Op::DelBar && outa != a) continue;
        int s1 = merge_sign(k2.first, restI);
        if (!s1) continue;
        int s2 = merge_sign(k2.second, restJ);
        if (!s2) continue;
        int s = s1 * s2;
        if ((degree(k2.second) * degree(restI)) & 1) s = -s;
        if (position & 1) s = -s;
        GaussianRational v = c * c2;
        out.add(k2.first | restI, k2.second | restJ, s < 0 ? -v : v);
      }
    };
    for (int i : indices(I)) expand(dphi_[i - 1], I & ~bit(i), J, pos++);
    for (int j : indices(J)) expand(dphibar_[j - 1], I, J & ~bit(j), pos++);
  }
  return out;
}

Form differential(const ManifoldSpec& spec, const Form& f, Op op) { return Calculus(spec).apply(op, f); }

KeyList bidegree_keys(int n, int a, int b) {
  KeyList out;
  for (Mask I : subsets(n, a))
    for (Mask J : subsets(n, b)) out.emplace_back(I, J);
  return out;
}

namespace {

using GVec = SparseVec<GaussianRational>;

// Rows of the complex-linear map x -> op(sum_A x_A basis_A), indexed by output keys.
std::vector<GVec> linear_rows(const std::vector<Form>& images) {
  std::map<std::pair<Mask, Mask>, GVec> rows;
  for (std::size_t col = 0; col < images.size(); ++col)
    for (const auto& [k, c] : images[col].terms()) rows[k][static_cast<int>(col)] = c;
  std::vector<GVec> out;
  for (auto& [k, r] : rows) out.push_back(std::move(r));
  return out;
}

Form combine(const std::vector<Form>& basis, const GVec& x, int n) {
  Form out(n);
  for (const auto& [i, c] : x) out += c * basis[i];
  return out;
}

}  // namespace

std::vector<Form> holomorphic_space(const ManifoldSpec& spec, int k) {
  const int n = spec.n;
  if (k < 0 || k > n) throw std::out_of_range("holomorphic_space: degree out of range");
  Calculus calc(spec);
  std::vector<Form> mons, images;
  for (Mask A : subsets(n, k)) {
    mons.push_back(Form::monomial(n, A, 0));
    images.push_back(calc.delbar(mons.back()));
  }
  std::vector<Form> out;
  for (const auto& x : nullspace(linear_rows(images), static_cast<int>(mons.size()))) out.push_back(combine(mons, x, n));
  return out;
}

GaussianRational F_pairing(const ManifoldSpec& spec, const Form& beta, const Form& rho) {
  if (!is_parallelizable(spec)) throw std::invalid_argument("F pairing needs a holomorphically parallelizable spec");
  return wedge(beta, rho).coefficient(full_mask(spec.n), 0);
}

PhkResult phk_construct(const ManifoldSpec& spec, int p) {
  const int n = spec.n;
  if (!is_parallelizable(spec)) throw std::invalid_argument("phk_construct needs a holomorphically parallelizable spec");
  if (p < 1 || p > n - 1) throw std::out_of_range("phk_construct: need 1 <= p <= n-1");
  const int k = n - p;
  Calculus calc(spec);
  PhkResult res;
  // Im(d: Omega^{k-1} -> Omega^k)
  Rref<GaussianRational> img(static_cast<int>(binomial(n, k)));
  const auto& kk = subsets(n, k);
  for (Mask A : subsets(n, k - 1)) {
    Form da = calc.d(Form::monomial(n, A, 0));
    GVec v;
    for (const auto& [key, c] : da.terms()) v[subset_position(n, key.first)] = c;
    if (img.insert(v)) res.image_basis.push_back(da);
  }
  // Psi with F(alpha, Psi) = 0 for alpha in the image
  const auto& pk = subsets(n, p);
  std::vector<GVec> rows;
  for (const auto& alpha : res.image_basis) {
    GVec row;
    for (std::size_t b = 0; b < pk.size(); ++b) {
      GaussianRational f = F_pairing(spec, alpha, Form::monomial(n, pk[b], 0));
      if (!f.is_zero()) row[static_cast<int>(b)] = f;
    }
    rows.push_back(row);
  }
  (void)kk;
  res.omega = Form(n);
  res.decomposition_simple = true;
  for (const auto& x : nullspace(rows, static_cast<int>(pk.size()))) {
    Form psi(n);
    for (const auto& [b, c] : x) psi.add(pk[b], 0, c);
    res.factors.push_back(psi);
    res.omega += sigma(p) * wedge(psi, conjugate(psi));
    if (!is_simple(psi)) res.decomposition_simple = false;
  }
  if (!calc.d(res.omega).is_zero()) throw std::logic_error("phk_construct produced a non-closed form");
  return res;
}

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::CertifiedNone: return "certified none";
    case SearchStatus::ExistsNoWitness: return "exists, no rational witness found";
    case SearchStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

ExactHolomorphicSpace exact_holomorphic_space(const ManifoldSpec& spec, int k) {
  const int n = spec.n;
  ExactHolomorphicSpace out;
  if (k < 1 || k > n) return out;
  Calculus calc(spec);
  auto B = holomorphic_space(spec, k - 1);
  // beta in span(B) with delbar del beta = 0
  std::vector<Form> images;
  for (const auto& b : B) images.push_back(calc.delbar(calc.del(b)));
  std::vector<Form> Bp;
  for (const auto& x : nullspace(linear_rows(images), static_cast<int>(B.size()))) Bp.push_back(combine(B, x, n));
  const auto& kk = subsets(n, k);
  Rref<GaussianRational> rr(static_cast<int>(kk.size()));
  for (const auto& beta : Bp) {
    Form alpha = calc.del(beta);
    GVec v;
    for (const auto& [key, c] : alpha.terms()) v[subset_position(n, key.first)] = c;
    if (rr.insert(v)) {
      out.alphas.push_back(alpha);
      out.betas.push_back(beta);
    }
  }
  return out;
}

bool verify_simple_exact(const ManifoldSpec& spec, const Form& alpha, const Form& beta) {
  if (alpha.is_zero()) return false;
  int k = degree(alpha.terms().begin()->first.first);
  if (!alpha.is_pure(k, 0) || !beta.is_pure(k - 1, 0)) return false;
  if (!is_simple(alpha)) return false;
  Calculus calc(spec);
  return calc.delbar(beta).is_zero() && calc.del(beta) == alpha;
}

namespace {

// Pluecker quadrics of x = sum a_j alpha_j: coefficient of phi_L in (i_{e_K} x) ^ x.
std::vector<groebner::Poly> plucker_quadrics(const std::vector<Form>& alphas, int n, int k) {
  const int d = static_cast<int>(alphas.size());
  std::map<std::pair<Mask, Mask>, groebner::Poly> polys;  // (K, L) -> quadric
  for (Mask K : subsets(n, k - 1)) {
    std::vector<Form> contracted;
    for (const auto& a : alphas) {
      Form c = a;
      for (int i : indices(K)) c = contract(i, c);
      contracted.push_back(c);
    }
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) {
        Form w = wedge(contracted[j], alphas[l]);
        for (const auto& [key, c] : w.terms()) {
          groebner::Monomial m(d, 0);
          ++m[j];
          ++m[l];
          auto& poly = polys[{K, key.first}];
          auto [it, ins] = poly.terms.try_emplace(m, c);
          if (!ins) {
            it->second += c;
            if (it->second.is_zero()) poly.terms.erase(it);
          }
        }
      }
  }
  std::vector<groebner::Poly> out;
  for (auto& [key, p] : polys)
    if (!p.is_zero()) out.push_back(std::move(p));
  return out;
}

}  // namespace

SimpleExactResult find_simple_exact_holomorphic(const ManifoldSpec& spec, int k, const SimpleExactOptions& opts) {
  const int n = spec.n;
  SimpleExactResult res;
  auto E = exact_holomorphic_space(spec, k);
  const int d = static_cast<int>(E.alphas.size());
  res.space_dim = d;
  if (d == 0) {
    res.status = SearchStatus::CertifiedNone;
    res.method = "E_k = 0";
    return res;
  }
  auto found = [&](const Form& alpha, const Form& beta, const std::string& how) {
    if (!verify_simple_exact(spec, alpha, beta)) return false;
    res.status = SearchStatus::Found;
    res.alpha = alpha;
    res.beta = beta;
    res.method = how;
    return true;
  };
  // basis elements
  for (int j = 0; j < d; ++j)
    if (found(E.alphas[j], E.betas[j], "basis element")) return res;

  // monomials phi_A lying in E_k, expressed through the basis
  const auto& kk = subsets(n, k);
  Rref<GaussianRational> rr(static_cast<int>(kk.size()) + d, static_cast<int>(kk.size()));
  for (int j = 0; j < d; ++j) {
    GVec v;
    for (const auto& [key, c] : E.alphas[j].terms()) v[subset_position(n, key.first)] = c;
    v[static_cast<int>(kk.size()) + j] = GaussianRational(1);
    rr.insert(v);
  }
  for (std::size_t a = 0; a < kk.size(); ++a) {
    GVec v;
    v[static_cast<int>(a)] = GaussianRational(1);
    GVec r = rr.reduce(v);
    if (!r.empty() && r.begin()->first < static_cast<int>(kk.size())) continue;
    Form beta(n);
    for (const auto& [col, c] : r) beta += (-c) * E.betas[col - static_cast<int>(kk.size())];
    if (found(Form::monomial(n, kk[a], 0), beta, "coordinate monomial")) return res;
  }

  // random combinations with coefficients in {0, +-1, +-i, +-2}
  const GaussianRational I = GaussianRational::i();
  const std::vector<GaussianRational> coeffs = {0, 1, -1, I, -I, 2, -2};
  std::mt19937_64 rng(opts.seed ^ 0x2545f4914f6cdd1dULL);
  std::uniform_int_distribution<std::size_t> pick(0, coeffs.size() - 1);
  for (long t = 0; t < opts.draws && d > 1; ++t) {
    Form alpha(n), beta(n);
    for (int j = 0; j < d; ++j) {
      const auto& c = coeffs[pick(rng)];
      if (c.is_zero()) continue;
      alpha += c * E.alphas[j];
      beta += c * E.betas[j];
    }
    if (alpha.is_zero()) continue;
    if (is_simple(alpha) && found(alpha, beta, "random combination")) return res;
  }

  if (d <= opts.exhaustive_max_dim) {
    auto quadrics = plucker_quadrics(E.alphas, n, k);
    bool empty = quadrics.empty() ? false : groebner::projective_variety_empty(quadrics, d);
    res.status = empty ? SearchStatus::CertifiedNone : SearchStatus::ExistsNoWitness;
    res.method = "Pluecker system on E_k solved by Groebner basis";
    return res;
  }
  res.status = SearchStatus::Inconclusive;
  res.method = "budget exhausted";
  return res;
}

}  // namespace pkahler

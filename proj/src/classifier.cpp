#include "pkahler/classifier.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pkahler/lp.hpp"

namespace pkahler {

const char* to_string(KClass c) {
  switch (c) {
    case KClass::K: return "K";
    case KClass::WK: return "WK";
    case KClass::S: return "S";
    case KClass::PL: return "PL";
  }
  return "?";
}

std::optional<KClass> class_from_string(const std::string& s) {
  for (KClass c : kAllClasses)
    if (s == to_string(c)) return c;
  return std::nullopt;
}

const char* to_string(CertKind k) {
  switch (k) {
    case CertKind::BoundaryComponent: return "boundary-component";
    case CertKind::ClosedBoundaryComponent: return "closed-boundary-component";
    case CertKind::Boundary: return "boundary";
    case CertKind::DdbarExact: return "ddbar-exact";
    case CertKind::SimpleExactHolomorphic: return "simple-exact-holomorphic";
  }
  return "?";
}

std::optional<CertKind> cert_kind_from_string(const std::string& s) {
  for (CertKind k : {CertKind::BoundaryComponent, CertKind::ClosedBoundaryComponent, CertKind::Boundary,
                     CertKind::DdbarExact, CertKind::SimpleExactHolomorphic})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

CertKind cert_kind_for(KClass c) {
  switch (c) {
    case KClass::K: return CertKind::BoundaryComponent;
    case KClass::WK: return CertKind::ClosedBoundaryComponent;
    case KClass::S: return CertKind::Boundary;
    case KClass::PL: return CertKind::DdbarExact;
  }
  return CertKind::DdbarExact;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "Yes";
    case Verdict::No: return "No";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

using QVec = SparseVec<Rational>;

// Real kernel of the real-linear map sending parameter j to images[j]: each output
// coefficient contributes its real and imaginary part as an equation.
std::vector<QVec> real_kernel(const std::vector<Form>& images) {
  std::map<std::pair<Mask, Mask>, int> row_of;
  std::vector<QVec> rows;
  for (std::size_t j = 0; j < images.size(); ++j)
    for (const auto& [k, c] : images[j].terms()) {
      auto [it, ins] = row_of.try_emplace(k, static_cast<int>(rows.size()));
      if (ins) rows.resize(rows.size() + 2);
      if (c.re() != 0) rows[it->second][j] = c.re();
      if (c.im() != 0) rows[it->second + 1][j] = c.im();
    }
  Rref<Rational> r(static_cast<int>(images.size()));
  for (auto& row : rows)
    if (!row.empty()) r.insert(std::move(row));
  return r.nullspace();
}

Form combine(const std::vector<Form>& forms, const QVec& x, int n) {
  Form out(n);
  for (const auto& [j, v] : x) out += GaussianRational(v) * forms[j];
  return out;
}

std::vector<Form> complex_generators(int n, int a, int b) {
  std::vector<Form> out;
  if (a < 0 || b < 0 || a > n || b > n) return out;
  for (const auto& [I, J] : bidegree_keys(n, a, b)) {
    out.push_back(Form::monomial(n, I, J));
    out.push_back(Form::monomial(n, I, J, GaussianRational::i()));
  }
  return out;
}

// A real-linear family of potentials with their images T, after imposing the kind's
// side conditions.
struct PotentialFamily {
  std::vector<Form> potentials;
  std::vector<Form> images;
};

PotentialFamily potential_family(const ManifoldSpec& spec, int p, CertKind kind) {
  const int n = spec.n, q = n - p;
  Calculus c(spec);
  PotentialFamily fam;
  std::vector<Form> gens, constraint;
  switch (kind) {
    case CertKind::DdbarExact:
      if (q >= 1) gens = real_pp_basis(n, q - 1);
      for (const auto& g : gens) {
        fam.potentials.push_back(g);
        fam.images.push_back(GaussianRational::i() * c.ddbar(g));
      }
      return fam;
    case CertKind::BoundaryComponent:
    case CertKind::ClosedBoundaryComponent: {
      gens = complex_generators(n, q, q - 1);
      if (kind == CertKind::ClosedBoundaryComponent) {
        for (const auto& g : gens) constraint.push_back(c.ddbar(g));
        std::vector<Form> reduced;
        for (const auto& x : real_kernel(constraint)) reduced.push_back(combine(gens, x, n));
        gens = std::move(reduced);
      }
      for (const auto& g : gens) {
        fam.potentials.push_back(g);
        fam.images.push_back(c.del(conjugate(g)) + c.delbar(g));
      }
      return fam;
    }
    case CertKind::Boundary: {
      // R = R_+ + conj(R_+) with R_+ collecting the components of bidegree (a,b), a > b
      for (int a = q; a <= std::min(2 * q - 1, n); ++a) {
        int b = 2 * q - 1 - a;
        if (b < 0 || a <= b) continue;
        auto g = complex_generators(n, a, b);
        gens.insert(gens.end(), g.begin(), g.end());
      }
      std::vector<Form> dr;
      for (const auto& g : gens) {
        dr.push_back(c.d(g));
        constraint.push_back(dr.back() - dr.back().component(q, q));
      }
      for (const auto& x : real_kernel(constraint)) {
        Form rp = combine(gens, x, n);
        Form t = combine(dr, x, n).component(q, q);
        fam.potentials.push_back(rp + conjugate(rp));
        fam.images.push_back(t + conjugate(t));
      }
      return fam;
    }
    case CertKind::SimpleExactHolomorphic:
      break;
  }
  throw std::invalid_argument("potential_family: no linear family for this kind");
}

bool is_real_pp(const Form& f, int q) {
  return f.is_pure(q, q) && conjugate(f) == f;
}

}  // namespace

std::vector<Form> real_pp_basis(int n, int r) {
  std::vector<Form> out;
  if (r < 0 || r > n) return out;
  const auto& ks = subsets(n, r);
  GaussianRational s = sigma(r);
  for (std::size_t a = 0; a < ks.size(); ++a) {
    out.push_back(Form::monomial(n, ks[a], ks[a], s));
    for (std::size_t b = a + 1; b < ks.size(); ++b) {
      out.push_back(Form::monomial(n, ks[a], ks[b], s) + Form::monomial(n, ks[b], ks[a], s));
      GaussianRational is = GaussianRational::i() * s;
      out.push_back(Form::monomial(n, ks[a], ks[b], is) - Form::monomial(n, ks[b], ks[a], is));
    }
  }
  return out;
}

std::vector<Rational> real_pp_coordinates(const Form& omega, int r) {
  const int n = omega.dim();
  const auto& ks = subsets(n, r);
  GaussianRational inv = GaussianRational(1) / sigma(r);
  std::vector<Rational> out;
  for (std::size_t a = 0; a < ks.size(); ++a) {
    out.push_back((omega.coefficient(ks[a], ks[a]) * inv).re());
    for (std::size_t b = a + 1; b < ks.size(); ++b) {
      GaussianRational h = omega.coefficient(ks[a], ks[b]) * inv;
      out.push_back(h.re());
      out.push_back(h.im());
    }
  }
  return out;
}

ClosureSubspace closure_subspace(const ManifoldSpec& spec, int p, KClass cls) {
  const int n = spec.n;
  if (p < 1 || p > n - 1) throw std::invalid_argument("closure_subspace: p out of range");
  Calculus c(spec);
  ClosureSubspace sub;
  sub.n = n;
  sub.p = p;
  sub.cls = cls;

  auto omega_gens = real_pp_basis(n, p);
  const int n_omega = static_cast<int>(omega_gens.size());
  std::vector<std::vector<Form>> blocks;
  if (cls == KClass::WK) {
    blocks.push_back(complex_generators(n, p, p - 1));
    sub.aux_labels.push_back("alpha");
  } else if (cls == KClass::S) {
    for (int a = p + 1; a <= std::min(2 * p, n); ++a) {
      blocks.push_back(complex_generators(n, a, 2 * p - a));
      sub.aux_labels.push_back("Psi^{" + std::to_string(a) + "," + std::to_string(2 * p - a) + "}");
    }
  }

  std::vector<Form> images;
  for (const auto& g : omega_gens) {
    switch (cls) {
      case KClass::K: images.push_back(c.d(g)); break;
      case KClass::WK: images.push_back(c.del(g)); break;
      case KClass::S: images.push_back(c.d(g)); break;
      case KClass::PL: images.push_back(c.ddbar(g)); break;
    }
  }
  std::vector<std::pair<int, int>> where;  // (block, index) per auxiliary parameter
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t j = 0; j < blocks[b].size(); ++j) {
      const Form& g = blocks[b][j];
      images.push_back(cls == KClass::WK ? -c.ddbar(g) : c.d(g + conjugate(g)));
      where.emplace_back(static_cast<int>(b), static_cast<int>(j));
    }

  auto sols = real_kernel(images);
  const int ns = static_cast<int>(sols.size());
  Rref<Rational> r(n_omega + ns, n_omega);
  for (int s = 0; s < ns; ++s) {
    QVec v;
    for (const auto& [j, x] : sols[s])
      if (j < n_omega) v[j] = x;
    v[n_omega + s] = Rational(1);
    r.insert(std::move(v));
  }
  for (const auto& [pc, row] : r.rows()) {
    if (pc >= n_omega) continue;
    Form omega(n);
    std::vector<Form> aux(blocks.size(), Form(n));
    for (const auto& [col, x] : row) {
      if (col < n_omega) {
        omega += GaussianRational(x) * omega_gens[col];
        continue;
      }
      // tracking column: add x times the auxiliary part of solution s
      for (const auto& [j, y] : sols[col - n_omega]) {
        if (j < n_omega) continue;
        auto [b, idx] = where[j - n_omega];
        aux[b] += GaussianRational(x * y) * blocks[b][idx];
      }
    }
    sub.omegas.push_back(std::move(omega));
    sub.aux.push_back(std::move(aux));
    sub.pivots.push_back(pc);
  }
  return sub;
}

std::optional<std::vector<Form>> lift(const ClosureSubspace& sub, const Form& omega) {
  if (!omega.is_zero() && !is_real_pp(omega, sub.p)) return std::nullopt;
  auto coords = real_pp_coordinates(omega, sub.p);
  Form acc(sub.n);
  std::vector<Form> aux(sub.aux_labels.size(), Form(sub.n));
  for (std::size_t i = 0; i < sub.omegas.size(); ++i) {
    const Rational& x = coords[sub.pivots[i]];
    if (x == 0) continue;
    acc += GaussianRational(x) * sub.omegas[i];
    for (std::size_t b = 0; b < aux.size(); ++b) aux[b] += GaussianRational(x) * sub.aux[i][b];
  }
  if (!(acc == omega)) return std::nullopt;
  return aux;
}

Form assemble_closed_form(const Form& omega, const std::vector<Form>& aux) {
  Form psi = omega;
  for (const auto& a : aux) psi += a + conjugate(a);
  return psi;
}

bool verify_closure(const ManifoldSpec& spec, KClass cls, const Form& omega, const std::vector<Form>& aux) {
  Calculus c(spec);
  switch (cls) {
    case KClass::K: return c.d(omega).is_zero();
    case KClass::WK: return aux.size() == 1 && c.del(omega) == c.ddbar(aux[0]);
    case KClass::S: return c.d(assemble_closed_form(omega, aux)).is_zero();
    case KClass::PL: return c.ddbar(omega).is_zero();
  }
  return false;
}

std::optional<std::pair<std::vector<Form>, std::vector<Rational>>> exact_sp_decomposition(const Form& T) {
  const int n = T.dim();
  int q = -1;
  for (const auto& [k, c] : T.terms()) {
    int a = degree(k.first), b = degree(k.second);
    if (a != b || (q >= 0 && a != q)) return std::nullopt;
    q = a;
  }
  if (q < 0) return std::make_pair(std::vector<Form>{}, std::vector<Rational>{});
  const auto& ks = subsets(n, q);
  const int N = static_cast<int>(ks.size());
  GaussianRational inv = GaussianRational(1) / sigma(q);
  std::vector<std::vector<GaussianRational>> H(N, std::vector<GaussianRational>(N));
  for (const auto& [k, c] : T.terms())
    H[subset_position(n, k.first)][subset_position(n, k.second)] = c * inv;

  std::vector<Form> factors;
  std::vector<Rational> weights;
  std::vector<bool> used(N, false);
  while (true) {
    int piv = -1;
    for (int a = 0; a < N; ++a) {
      if (used[a]) continue;
      if (!H[a][a].is_real()) return std::nullopt;
      if (H[a][a].re() < 0) return std::nullopt;
      if (H[a][a].re() > 0 && piv < 0) piv = a;
    }
    if (piv < 0) break;
    used[piv] = true;
    GaussianRational d = H[piv][piv];
    std::vector<GaussianRational> u(N);
    for (int a = 0; a < N; ++a) u[a] = H[a][piv] / d;
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        if (!u[a].is_zero() && !u[b].is_zero()) H[a][b] -= d * u[a] * conj(u[b]);
    Form eta = holomorphic_from_coords(n, q, u);
    if (!is_simple(eta)) return std::nullopt;
    factors.push_back(std::move(eta));
    weights.push_back(d.re());
  }
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      if (!H[a][b].is_zero()) return std::nullopt;
  return std::make_pair(std::move(factors), std::move(weights));
}

std::optional<Form> solve_potential(const ManifoldSpec& spec, int p, CertKind kind, const Form& T) {
  auto fam = potential_family(spec, p, kind);
  const int m = static_cast<int>(fam.images.size());
  std::map<std::pair<Mask, Mask>, int> row_of;
  std::vector<QVec> rows;
  auto row_for = [&](const std::pair<Mask, Mask>& k) {
    auto [it, ins] = row_of.try_emplace(k, static_cast<int>(rows.size()));
    if (ins) rows.resize(rows.size() + 2);
    return it->second;
  };
  for (int j = 0; j < m; ++j)
    for (const auto& [k, c] : fam.images[j].terms()) {
      int r = row_for(k);
      if (c.re() != 0) rows[r][j] = c.re();
      if (c.im() != 0) rows[r + 1][j] = c.im();
    }
  for (const auto& [k, c] : T.terms()) {
    int r = row_for(k);
    if (c.re() != 0) rows[r][m] = c.re();
    if (c.im() != 0) rows[r + 1][m] = c.im();
  }
  Rref<Rational> rr(m + 1);
  for (auto& row : rows)
    if (!row.empty()) rr.insert(std::move(row));
  auto x = rr.particular(m);
  if (!x) return std::nullopt;
  Form pot = combine(fam.potentials, *x, spec.n);
  return pot;
}

CertificateCheck verify_certificate(const ManifoldSpec& spec, const CurrentCertificate& cert) {
  const int n = spec.n, q = n - cert.p;
  auto fail = [](std::string why) { return CertificateCheck{false, std::move(why)}; };
  if (cert.p < 1 || cert.p > n - 1) return fail("p out of range");
  if (cert.T.dim() != n) return fail("T has the wrong frame");
  if (cert.T.is_zero()) return fail("T = 0");
  if (!is_real_pp(cert.T, q)) return fail("T is not a real (" + std::to_string(q) + "," + std::to_string(q) + ")-form");
  auto sp = verify_sp_decomposition(cert.T, cert.sp_factors, cert.sp_weights);
  if (!sp.ok) return fail("strong positivity: " + sp.reason);
  Calculus c(spec);
  switch (cert.kind) {
    case CertKind::SimpleExactHolomorphic: {
      if (!cert.alpha || !cert.beta) return fail("missing alpha or beta");
      if (!verify_simple_exact(spec, *cert.alpha, *cert.beta)) return fail("alpha is not a simple del-exact holomorphic form");
      Form aa = wedge(*cert.alpha, conjugate(*cert.alpha));
      if (!(cert.T == sigma(q) * aa)) return fail("T != sigma_q alpha ^ conj(alpha)");
      Form dd = c.ddbar(wedge(*cert.beta, conjugate(*cert.beta)));
      if (!(dd == aa) && !(dd == -aa)) return fail("alpha ^ conj(alpha) is not del delbar (beta ^ conj(beta))");
      return {true, ""};
    }
    case CertKind::DdbarExact: {
      if (!cert.potential) return fail("missing potential A");
      const Form& A = *cert.potential;
      if (!A.is_zero() && !is_real_pp(A, q - 1)) return fail("A is not a real (q-1,q-1)-form");
      if (!(GaussianRational::i() * c.ddbar(A) == cert.T)) return fail("T != i del delbar A");
      return {true, ""};
    }
    case CertKind::BoundaryComponent:
    case CertKind::ClosedBoundaryComponent: {
      if (!cert.potential) return fail("missing potential S");
      const Form& S = *cert.potential;
      if (!S.is_zero() && !S.is_pure(q, q - 1)) return fail("S is not of bidegree (q,q-1)");
      if (!(c.del(conjugate(S)) + c.delbar(S) == cert.T)) return fail("T != del conj(S) + delbar S");
      if (cert.kind == CertKind::ClosedBoundaryComponent && !c.ddbar(S).is_zero()) return fail("del delbar S != 0");
      return {true, ""};
    }
    case CertKind::Boundary: {
      if (!cert.potential) return fail("missing potential R");
      const Form& R = *cert.potential;
      if (!(conjugate(R) == R)) return fail("R is not real");
      for (const auto& [a, b] : R.bidegrees())
        if (a + b != 2 * q - 1) return fail("R does not have degree 2q-1");
      if (!(c.d(R) == cert.T)) return fail("T != d R");
      return {true, ""};
    }
  }
  return fail("unknown kind");
}

namespace {

// Current of integration over a plane, as the form pairing to Omega(V).
FormF plane_current(const Eigen::MatrixXcd& V, int n, int p) {
  Eigen::VectorXcd P = plucker_f(V);
  std::vector<Complex> pv(P.data(), P.data() + P.size());
  return g_isomorphism(strong_square(pv, n, p));
}

std::vector<Eigen::MatrixXcd> seed_planes(int n, int p) {
  std::vector<Eigen::MatrixXcd> out;
  for (Mask K : subsets(n, p)) {
    Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(n, p);
    auto idx = indices(K);
    for (int c = 0; c < p; ++c) V(idx[c] - 1, c) = 1;
    out.push_back(V);
  }
  const Complex phases[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const double r = 1 / std::sqrt(2.0);
  for (Mask K : subsets(n, p - 1)) {
    auto idx = indices(K);
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b) {
        if (contains(K, a) || contains(K, b)) continue;
        for (Complex ph : phases) {
          Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(n, p);
          for (int c = 0; c < p - 1; ++c) V(idx[c] - 1, c) = 1;
          V(a - 1, p - 1) = r;
          V(b - 1, p - 1) = r * ph;
          out.push_back(V);
        }
      }
  }
  return out;
}

std::optional<CurrentCertificate> finish_certificate(const ManifoldSpec& spec, int p, CertKind kind, const Form& T,
                                                     const std::optional<Form>& potential) {
  if (T.is_zero() || !potential) return std::nullopt;
  auto sp = exact_sp_decomposition(T);
  if (!sp) return std::nullopt;
  CurrentCertificate cert;
  cert.kind = kind;
  cert.p = p;
  cert.T = T;
  cert.sp_factors = sp->first;
  cert.sp_weights = sp->second;
  cert.potential = *potential;
  if (!verify_certificate(spec, cert).ok) return std::nullopt;
  return cert;
}

// Float candidate T (a nonnegative combination of plane currents) to an exact,
// verified certificate: project onto the image of the potential map, rationalize,
// re-solve exactly.
std::optional<CurrentCertificate> recover_certificate(const ManifoldSpec& spec, int p, CertKind kind, const FormF& Tf) {
  const int n = spec.n, q = n - p;
  auto fam = potential_family(spec, p, kind);
  if (fam.images.empty()) return std::nullopt;
  auto keys = bidegree_keys(n, q, q);
  const int rows = 2 * static_cast<int>(keys.size()), m = static_cast<int>(fam.images.size());
  Eigen::MatrixXd M(rows, m);
  Eigen::VectorXd t(rows);
  for (int j = 0; j < m; ++j)
    for (std::size_t r = 0; r < keys.size(); ++r) {
      Complex v = fam.images[j].coefficient(keys[r].first, keys[r].second).to_complex();
      M(2 * r, j) = v.real();
      M(2 * r + 1, j) = v.imag();
    }
  for (std::size_t r = 0; r < keys.size(); ++r) {
    Complex v = Tf.coefficient(keys[r].first, keys[r].second);
    t(2 * r) = v.real();
    t(2 * r + 1) = v.imag();
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
  Eigen::VectorXd x = cod.solve(t);
  Eigen::VectorXd tp = M * x;
  double scale = tp.cwiseAbs().maxCoeff();
  if (!(scale > 1e-9)) return std::nullopt;
  tp /= scale;
  x /= scale;

  // attempt 1: rationalize T itself
  Form T(n);
  for (std::size_t r = 0; r < keys.size(); ++r)
    T.add(keys[r].first, keys[r].second,
          GaussianRational(rationalize(tp(2 * r), 1000000), rationalize(tp(2 * r + 1), 1000000)));
  T = GaussianRational(Rational(1, 2)) * (T + conjugate(T));
  if (auto c = finish_certificate(spec, p, kind, T, solve_potential(spec, p, kind, T))) return c;

  // attempt 2: rationalize the potential
  Form pot(n), T2(n);
  for (int j = 0; j < m; ++j) {
    Rational xr = rationalize(x(j), 1000000);
    if (xr == 0) continue;
    pot += GaussianRational(xr) * fam.potentials[j];
    T2 += GaussianRational(xr) * fam.images[j];
  }
  return finish_certificate(spec, p, kind, T2, pot);
}

struct LpBasis {
  std::vector<HermitianRep> reps;  // orthonormalized float basis
  Eigen::MatrixXd to_original;     // coefficients on sub.omegas = to_original * x
  std::vector<double> trace;
};

LpBasis orthonormal_basis(const ClosureSubspace& sub) {
  const int d = sub.parameter_count();
  const int N = static_cast<int>(binomial(sub.n, sub.p));
  Eigen::MatrixXd B(2 * N * N, d);
  for (int i = 0; i < d; ++i) {
    auto rep = hermitian_rep(to_float(sub.omegas[i]), sub.p);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        B(2 * (a * N + b), i) = rep.matrix(a, b).real();
        B(2 * (a * N + b) + 1, i) = rep.matrix(a, b).imag();
      }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  Eigen::MatrixXd R = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  Eigen::MatrixXd Q = B * R.inverse();
  LpBasis out;
  out.to_original = R.inverse();
  for (int i = 0; i < d; ++i) {
    HermitianRep rep{sub.n, sub.p, Eigen::MatrixXcd(N, N)};
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) rep.matrix(a, b) = Complex(Q(2 * (a * N + b), i), Q(2 * (a * N + b) + 1, i));
    out.trace.push_back(rep.matrix.trace().real());
    out.reps.push_back(std::move(rep));
  }
  return out;
}

HermitianRep combine_reps(const LpBasis& basis, const std::vector<double>& x, int n, int p) {
  const int N = static_cast<int>(binomial(n, p));
  HermitianRep rep{n, p, Eigen::MatrixXcd::Zero(N, N)};
  for (std::size_t i = 0; i < x.size(); ++i) rep.matrix += x[i] * basis.reps[i].matrix;
  return rep;
}

std::uint64_t cell_seed(std::uint64_t seed, int p, KClass cls, int round) {
  return seed * 1000003ULL + static_cast<std::uint64_t>(p) * 7919ULL + static_cast<std::uint64_t>(cls) * 104729ULL +
         static_cast<std::uint64_t>(round) * 15485863ULL;
}

std::optional<Decision> try_yes(const ManifoldSpec& spec, const ClosureSubspace& sub, KClass cls, const Form& omega,
                                const DecideOptions& opts, std::uint64_t seed, const std::string& method) {
  auto aux = lift(sub, omega);
  if (!aux || !verify_closure(spec, cls, omega, *aux)) return std::nullopt;
  OptimizerOptions o = opts.optimizer;
  o.seed = seed;
  auto v = check_transverse(to_float(omega), o, opts.tol);
  if (v.status != Status::StrictlyIn) return std::nullopt;
  Decision d;
  d.verdict = Verdict::Yes;
  d.method = method;
  d.omega = omega;
  d.aux = *aux;
  d.plane_min = v.min_value;
  return d;
}

}  // namespace

Decision decide(const ManifoldSpec& spec, int p, KClass cls, const DecideOptions& opts) {
  const int n = spec.n, q = n - p;
  if (p < 1 || p > n - 1) throw std::invalid_argument("decide: p out of range");

  if (opts.parallelizable_shortcut && is_parallelizable(spec)) {
    SimpleExactOptions so;
    so.seed = opts.seed;
    auto r = find_simple_exact_holomorphic(spec, q, so);
    if (r.status == SearchStatus::Found) {
      CurrentCertificate cert;
      cert.kind = CertKind::SimpleExactHolomorphic;
      cert.p = p;
      cert.alpha = r.alpha;
      cert.beta = r.beta;
      cert.T = sigma(q) * wedge(*r.alpha, conjugate(*r.alpha));
      cert.sp_factors = {*r.alpha};
      if (verify_certificate(spec, cert).ok) {
        Decision d;
        d.verdict = Verdict::No;
        d.method = "simple exact holomorphic form (" + r.method + ")";
        d.cert = std::move(cert);
        return d;
      }
    } else if (r.status == SearchStatus::CertifiedNone) {
      auto phk = phk_construct(spec, p);
      OptimizerOptions o = opts.optimizer;
      o.seed = cell_seed(opts.seed, p, cls, 0);
      auto v = check_transverse(to_float(phk.omega), o, opts.tol);
      if (v.status == Status::StrictlyIn) {
        Decision d;
        d.verdict = Verdict::Yes;
        d.method = "closed holomorphic-square form (no simple exact holomorphic " + std::to_string(q) + "-form)";
        d.omega = phk.omega;
        if (cls == KClass::WK) d.aux = {Form(n)};
        if (cls == KClass::S)
          for (int a = p + 1; a <= std::min(2 * p, n); ++a) d.aux.push_back(Form(n));
        d.plane_min = v.min_value;
        return d;
      }
    }
  }

  auto sub = closure_subspace(spec, p, cls);
  std::vector<std::pair<Form, std::string>> candidates;
  if (opts.try_candidates) candidates.emplace_back(standard_pp(n, p), "standard form");
  if (opts.try_candidates && is_parallelizable(spec)) {
    try {
      candidates.emplace_back(phk_construct(spec, p).omega, "holomorphic-square form");
    } catch (const std::exception&) {
    }
  }
  for (const auto& [omega, label] : candidates)
    if (auto d = try_yes(spec, sub, cls, omega, opts, cell_seed(opts.seed, p, cls, 0), label)) return *d;

  const CertKind kind = cert_kind_for(cls);
  Decision out;
  const int d = sub.parameter_count();
  const double N = static_cast<double>(binomial(n, p));
  if (d == 0) {
    out.method = "empty closure subspace";
    if (auto c = recover_certificate(spec, p, kind, to_float(standard_pp(n, q)))) {
      out.verdict = Verdict::No;
      out.cert = std::move(c);
    }
    return out;
  }

  auto basis = orthonormal_basis(sub);
  std::vector<Eigen::MatrixXcd> planes = seed_planes(n, p);
  std::vector<std::vector<double>> values;  // values[k][i] = basis i on plane k
  auto add_plane = [&](const Eigen::MatrixXcd& V) {
    std::vector<double> row(d);
    for (int i = 0; i < d; ++i) row[i] = evaluate_on_plane(basis.reps[i], V);
    values.push_back(std::move(row));
  };
  for (const auto& V : planes) add_plane(V);

  // Level-set stabilization: a raw LP vertex sits on a corner of a degenerate optimal
  // face and the cuts barely move it, so the iterate is the point nearest (in l1) to the
  // best form so far that still clears a level between its value and the LP bound.
  std::vector<double> best_x;
  double best_f = -std::numeric_limits<double>::infinity();
  auto level_point = [&](double level, double M) -> std::optional<std::vector<double>> {
    const int K = static_cast<int>(values.size());
    lp::Problem pr;
    pr.nvars = 3 * d;
    pr.c.assign(pr.nvars, 1.0);
    pr.free.assign(pr.nvars, false);
    for (int i = 0; i < d; ++i) {
      pr.c[i] = 0;
      pr.free[i] = true;
    }
    for (int k = 0; k < K; ++k) {
      lp::Row r;
      r.a.assign(pr.nvars, 0.0);
      for (int i = 0; i < d; ++i) r.a[i] = values[k][i];
      r.sense = lp::Sense::GE;
      r.b = level;
      pr.rows.push_back(std::move(r));
    }
    lp::Row tr;
    tr.a.assign(pr.nvars, 0.0);
    for (int i = 0; i < d; ++i) tr.a[i] = basis.trace[i];
    tr.sense = lp::Sense::EQ;
    tr.b = 1;
    pr.rows.push_back(tr);
    for (int i = 0; i < d; ++i) {
      lp::Row r;
      r.a.assign(pr.nvars, 0.0);
      r.a[i] = 1;
      r.a[d + i] = -1;
      r.a[2 * d + i] = 1;
      r.sense = lp::Sense::EQ;
      r.b = best_x[i];
      pr.rows.push_back(std::move(r));
      lp::Row lo, hi;
      lo.a.assign(pr.nvars, 0.0);
      lo.a[i] = 1;
      hi.a = lo.a;
      lo.sense = lp::Sense::GE;
      lo.b = -M;
      hi.sense = lp::Sense::LE;
      hi.b = M;
      pr.rows.push_back(std::move(lo));
      pr.rows.push_back(std::move(hi));
    }
    auto sol = lp::solve(pr);
    if (sol.outcome != lp::Outcome::Optimal) return std::nullopt;
    return std::vector<double>(sol.x.begin(), sol.x.begin() + d);
  };

  // Evaluates an iterate (trace-1 scale): Yes when it verifies, otherwise its most
  // violated planes join the witness set.
  auto probe = [&](const std::vector<double>& x1, int round) -> std::optional<Decision> {
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = N * x1[i];
    auto rep = combine_reps(basis, x, n, p);
    OptimizerOptions o = opts.optimizer;
    o.seed = cell_seed(opts.seed, p, cls, round);
    auto g = min_over_grassmannian(rep, o);
    if (g.value / N > best_f) {
      best_f = g.value / N;
      best_x = x1;
    }
    if (g.value > opts.tol) {
      Eigen::VectorXd xv = Eigen::Map<Eigen::VectorXd>(x.data(), d);
      Eigen::VectorXd c = basis.to_original * xv;
      double scale = c.cwiseAbs().maxCoeff();
      Form omega(n);
      for (int i = 0; i < d; ++i) {
        Rational ci = rationalize(c(i) / scale, 1000000);
        if (ci != 0) omega += GaussianRational(ci) * sub.omegas[i];
      }
      if (auto dy = try_yes(spec, sub, cls, omega, opts, cell_seed(opts.seed, p, cls, 1000 + round), "cutting-plane LP")) {
        dy->rounds = round;
        dy->witnesses = out.witnesses;
        dy->slack = out.slack;
        dy->trace = out.trace;
        return dy;
      }
    }
    planes.push_back(g.V);
    add_plane(g.V);
    // further violated local minima, most negative first
    std::vector<int> order(g.restart_planes.size());
    for (std::size_t r = 0; r < order.size(); ++r) order[r] = static_cast<int>(r);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return g.restart_values[a] < g.restart_values[b]; });
    int extra = 0;
    std::vector<double> seen{g.value};
    for (int r : order) {
      if (extra >= 7 || g.restart_values[r] > -opts.tol) break;
      bool dup = false;
      for (double v : seen) dup |= std::abs(v - g.restart_values[r]) <= 1e-6 * (1 + std::abs(v));
      if (dup) continue;
      seen.push_back(g.restart_values[r]);
      planes.push_back(g.restart_planes[r]);
      add_plane(g.restart_planes[r]);
      ++extra;
    }
    return std::nullopt;
  };

  // first stability center: the projection of the standard form, trace-normalized
  double tt = 0;
  for (double t : basis.trace) tt += t * t;
  if (tt > 1e-18) {
    std::vector<double> x0(d);
    for (int i = 0; i < d; ++i) x0[i] = basis.trace[i] / tt;
    if (auto dy = probe(x0, 0)) return *dy;
  }

  for (int round = 1; round <= opts.rounds; ++round) {
    out.rounds = round;
    const int K = static_cast<int>(values.size());
    out.witnesses = K;
    // min y + M sum(u + v) : sum_k c_k values[k] - y trace + u - v = 0, sum c = 1, with
    // c, u, v >= 0. Its multipliers are the boxed slack problem
    //   max t : values.x >= t, trace.x = 1, |x_i| <= M,   x = -duals, t = y.
    // A certificate needs u = v = 0, i.e. the box inactive.
    const double M = 10;
    lp::Problem lpd;
    lpd.nvars = K + 1 + 2 * d;
    lpd.c.assign(lpd.nvars, M);
    for (int k = 0; k <= K; ++k) lpd.c[k] = 0;
    lpd.c[K] = 1;
    lpd.free.assign(lpd.nvars, false);
    lpd.free[K] = true;
    for (int i = 0; i < d; ++i) {
      lp::Row r;
      r.a.assign(lpd.nvars, 0.0);
      for (int k = 0; k < K; ++k) r.a[k] = values[k][i];
      r.a[K] = -basis.trace[i];
      r.a[K + 1 + 2 * i] = 1;
      r.a[K + 2 + 2 * i] = -1;
      r.sense = lp::Sense::EQ;
      lpd.rows.push_back(std::move(r));
    }
    lp::Row sum;
    sum.a.assign(lpd.nvars, 0.0);
    for (int k = 0; k < K; ++k) sum.a[k] = 1;
    sum.sense = lp::Sense::EQ;
    sum.b = 1;
    lpd.rows.push_back(sum);
    auto sol = lp::solve(lpd);
    if (sol.outcome == lp::Outcome::Unbounded) {
      // the trace vanishes on the whole subspace: the identity current annihilates it
      out.method = "trace-free closure subspace";
      if (auto c = recover_certificate(spec, p, kind, to_float(standard_pp(n, q)))) {
        out.verdict = Verdict::No;
        out.cert = std::move(c);
      }
      return out;
    }
    if (sol.outcome != lp::Outcome::Optimal) {
      out.method = std::string("slack LP ") + lp::to_string(sol.outcome);
      return out;
    }
    const double y = sol.x[K];
    double box_active = 0;
    for (int j = K + 1; j < lpd.nvars; ++j) box_active += sol.x[j];
    out.slack = N * y;  // on the trace-N scale
    out.trace.push_back(out.slack);
    if (out.slack <= opts.tol && box_active <= 1e-9) {
      FormF Tf(n);
      for (int k = 0; k < K; ++k)
        if (sol.x[k] > 1e-12) Tf += Complex(sol.x[k]) * plane_current(planes[k], n, p);
      Tf += Complex(std::max(0.0, -y)) * to_float(standard_pp(n, q));
      if (auto c = recover_certificate(spec, p, kind, Tf)) {
        out.verdict = Verdict::No;
        out.method = "cutting-plane LP dual";
        out.cert = std::move(c);
        return out;
      }
      out.method = "cutting-plane LP dual (certificate not exact)";
      return out;
    }

    std::vector<double> x1(d);  // trace-1 scale
    for (int i = 0; i < d; ++i) x1[i] = -sol.duals[i];
    if (!best_x.empty())
      if (auto lx = level_point(best_f + 0.5 * (y - best_f), M)) x1 = std::move(*lx);
    if (auto dy = probe(x1, round)) return *dy;
  }
  out.method = "cutting-plane budget exhausted";
  return out;
}

Verdict ClassificationTable::at(int p, KClass c) const {
  auto it = cells.find({p, c});
  return it == cells.end() ? Verdict::Unknown : it->second.decision.verdict;
}

bool propagate_implications(ClassificationTable& t) {
  bool ok = true;
  auto set = [&](int p, KClass c, Verdict v, std::pair<int, KClass> from) {
    auto it = t.cells.find({p, c});
    if (it == t.cells.end()) return false;
    Verdict cur = it->second.decision.verdict;
    if (cur == v) return false;
    if (cur != Verdict::Unknown) {
      ok = false;
      return false;
    }
    it->second.decision = Decision{};
    it->second.decision.verdict = v;
    it->second.decision.method = std::string("implied by ") + std::to_string(from.first) + to_string(from.second);
    it->second.implied_from = from;
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int p = 1; p < t.n; ++p)
      for (int a = 0; a < 4; ++a) {
        KClass ca = kAllClasses[a];
        Verdict v = t.at(p, ca);
        if (v == Verdict::Yes)
          for (int b = a + 1; b < 4; ++b) changed |= set(p, kAllClasses[b], Verdict::Yes, {p, ca});
        if (v == Verdict::No)
          for (int b = 0; b < a; ++b) changed |= set(p, kAllClasses[b], Verdict::No, {p, ca});
      }
    // a Kaehler form w gives closed transverse w^p; a 1S form psi gives (psi^p)^{p,p} transverse
    for (KClass c : {KClass::K, KClass::S})
      for (int p = 2; p < t.n; ++p) {
        if (t.at(1, c) == Verdict::Yes) changed |= set(p, c, Verdict::Yes, {1, c});
        if (t.at(p, c) == Verdict::No) changed |= set(1, c, Verdict::No, {p, c});
      }
  }
  return ok;
}

bool table_consistent(const ClassificationTable& t) {
  for (int p = 1; p < t.n; ++p)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        if (t.at(p, kAllClasses[a]) == Verdict::Yes && t.at(p, kAllClasses[b]) == Verdict::No) return false;
  return true;
}

ClassificationTable classification_table(const ManifoldSpec& spec, const DecideOptions& opts) {
  ClassificationTable t;
  t.spec_name = spec.name;
  t.n = spec.n;
  for (int p = 1; p < spec.n; ++p)
    for (KClass c : kAllClasses) t.cells[{p, c}] = Cell{};
  const bool parallelizable = is_parallelizable(spec);
  for (int p = spec.n - 1; p >= 1; --p)
    for (KClass c : {KClass::PL, KClass::S, KClass::K, KClass::WK}) {
      propagate_implications(t);
      auto& cell = t.cells[{p, c}];
      if (cell.decision.verdict != Verdict::Unknown) continue;
      cell.decision = decide(spec, p, c, opts);
      if (p == spec.n - 1 && c == KClass::PL && cell.decision.verdict != Verdict::Yes) {
        cell.decision.verdict = Verdict::Yes;
        cell.decision.method = "every compact manifold carries a Gauduchon metric";
      }
      if (cell.decision.verdict == Verdict::Yes && !parallelizable && cell.decision.omega)
        cell.note = "invariant-level";
    }
  propagate_implications(t);
  return t;
}

}  // namespace pkahler

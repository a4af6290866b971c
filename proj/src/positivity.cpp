#include "pkahler/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pkahler {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

const char* to_string(Cone c) {
  switch (c) {
    case Cone::SP: return "SP";
    case Cone::P: return "P";
    case Cone::WP: return "WP";
  }
  return "?";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::StrictlyIn: return "StrictlyIn";
    case Status::In: return "In";
    case Status::NotIn: return "NotIn";
    case Status::Unknown: return "Unknown";
  }
  return "?";
}

int pp_degree(const FormF& omega) {
  int p = -1;
  for (const auto& [k, c] : omega.terms()) {
    int a = degree(k.first), b = degree(k.second);
    if (a != b || (p >= 0 && a != p)) throw std::invalid_argument("expected a form of pure bidegree (p,p)");
    p = a;
  }
  return p;
}

HermitianRep hermitian_rep(const FormF& omega, int p) {
  const int n = omega.dim();
  if (p < 0) p = 0;
  if (!omega.is_pure(p, p)) throw std::invalid_argument("expected a form of pure bidegree (p,p)");
  const auto& ks = subsets(n, p);
  HermitianRep rep{n, p, MatrixXcd::Zero(ks.size(), ks.size())};
  Complex inv = 1.0 / sigma_f(p);
  for (const auto& [k, c] : omega.terms())
    rep.matrix(subset_position(n, k.first), subset_position(n, k.second)) = c * inv;
  return rep;
}

FormF form_from_rep(const HermitianRep& rep) {
  const auto& ks = subsets(rep.n, rep.p);
  FormF out(rep.n);
  Complex s = sigma_f(rep.p);
  for (std::size_t a = 0; a < ks.size(); ++a)
    for (std::size_t b = 0; b < ks.size(); ++b) out.add(ks[a], ks[b], s * rep.matrix(a, b));
  return out;
}

double hermitian_defect(const HermitianRep& rep) {
  double scale = rep.matrix.cwiseAbs().maxCoeff();
  if (scale == 0) return 0;
  return (rep.matrix - rep.matrix.adjoint()).cwiseAbs().maxCoeff() / scale;
}

namespace {

void require_real(const HermitianRep& rep) {
  if (hermitian_defect(rep) > 1e-9) throw std::invalid_argument("form is not real");
}

double scale_of(const MatrixXcd& H) {
  double s = H.size() ? H.cwiseAbs().maxCoeff() : 0.0;
  return s > 0 ? s : 1.0;
}

Eigen::SelfAdjointEigenSolver<MatrixXcd> solve(const MatrixXcd& H) {
  MatrixXcd Hs = 0.5 * (H + H.adjoint());
  return Eigen::SelfAdjointEigenSolver<MatrixXcd>(Hs);
}

}  // namespace

EigenDecomposition eigen_decompose(const FormF& omega, int p) {
  auto rep = hermitian_rep(omega, p);
  require_real(rep);
  auto es = solve(rep.matrix);
  EigenDecomposition out;
  out.vectors = es.eigenvectors();
  const auto& ks = subsets(rep.n, rep.p);
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    out.values.push_back(es.eigenvalues()(j));
    FormF psi(rep.n);
    for (std::size_t a = 0; a < ks.size(); ++a) psi.add(ks[a], 0, out.vectors(a, j));
    out.forms.push_back(psi);
  }
  return out;
}

ConeVerdict classify_P(const FormF& omega, double tol) {
  auto rep = hermitian_rep(omega);
  require_real(rep);
  double s = scale_of(rep.matrix);
  auto es = solve(rep.matrix / s);
  ConeVerdict v;
  v.cone = Cone::P;
  v.certified = true;
  double lmin = es.eigenvalues()(0);
  v.min_value = lmin * s;
  v.evidence = "eigenvalues";
  if (lmin > tol) {
    v.status = Status::StrictlyIn;
  } else if (lmin >= -tol) {
    v.status = Status::In;
  } else {
    v.status = Status::NotIn;
    v.eigenvector = es.eigenvectors().col(0);
  }
  return v;
}

namespace {

// Exact path for p = 1 (the plane is conj(u) for the bottom eigenvector u) and by
// duality for p = n - 1.
ConeVerdict eigen_transverse(const HermitianRep& rep, double tol) {
  const int n = rep.n, p = rep.p;
  bool dual = (p == n - 1 && p != 1);
  MatrixXcd H = dual ? dual_hermitian(n, p, rep.matrix) : rep.matrix;
  double s = scale_of(H);
  auto es = solve(H / s);
  double lmin = es.eigenvalues()(0);
  MatrixXcd W = es.eigenvectors().col(0).conjugate();
  MatrixXcd V = dual ? complement_plane(W) : W;
  ConeVerdict v;
  v.cone = Cone::WP;
  v.certified = true;
  v.min_value = lmin * s;
  v.evidence = dual ? "eigenvalues of the complementary (1,1) problem" : "eigenvalues";
  v.plane = PlaneWitness{V, evaluate_on_plane(rep, V)};
  v.status = lmin > tol ? Status::StrictlyIn : (lmin >= -tol ? Status::In : Status::NotIn);
  return v;
}

}  // namespace

ConeVerdict check_transverse(const FormF& omega, const OptimizerOptions& opts, double tol) {
  auto rep = hermitian_rep(omega);
  require_real(rep);
  const int n = rep.n, p = rep.p;
  ConeVerdict v;
  v.cone = Cone::WP;
  double s = scale_of(rep.matrix);
  if (p == 0 || p == n) {
    double x = rep.matrix(0, 0).real();
    v.certified = true;
    v.min_value = x;
    v.evidence = "single coordinate";
    v.status = x / s > tol ? Status::StrictlyIn : (x / s >= -tol ? Status::In : Status::NotIn);
    MatrixXcd V = MatrixXcd::Identity(n, p);
    v.plane = PlaneWitness{V, x};
    return v;
  }
  if (p == 1 || p == n - 1) return eigen_transverse(rep, tol);

  auto es = solve(rep.matrix / s);
  double lmin = es.eigenvalues()(0);
  if (lmin > tol) {
    // P-interior: every unit simple vector has value >= lmin.
    v.status = Status::StrictlyIn;
    v.certified = true;
    v.min_value = lmin * s;
    v.evidence = "eigenvalue lower bound";
    return v;
  }
  auto g = min_over_grassmannian(rep, opts);
  v.plane = PlaneWitness{g.V, g.value};
  v.min_value = g.value;
  if (g.value / s < -tol) {
    v.status = Status::NotIn;
    v.certified = true;
    v.evidence = "negative plane";
  } else if (g.value / s > tol) {
    v.status = Status::StrictlyIn;
    v.certified = false;
    v.evidence = "multistart minimum over " + std::to_string(opts.restarts) + " restarts";
  } else if (lmin >= -tol) {
    v.status = Status::In;
    v.certified = true;
    v.evidence = "positive with a zero plane value";
  } else {
    v.status = Status::Unknown;
    v.evidence = "minimum within the zero band";
  }
  return v;
}

double sample_square_pairing_min(const FormF& omega, int count, std::uint64_t seed) {
  auto rep = hermitian_rep(omega);
  const int n = rep.n, k = n - rep.p;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const auto& ks = subsets(n, k);
  double best = INFINITY;
  for (int t = 0; t < count; ++t) {
    FormF eta(n);
    double norm = 0;
    std::vector<Complex> c(ks.size());
    for (auto& x : c) {
      x = Complex(g(rng), g(rng));
      norm += std::norm(x);
    }
    for (std::size_t a = 0; a < ks.size(); ++a) eta.add(ks[a], 0, c[a] / std::sqrt(norm));
    FormF sq = sigma_f(k) * wedge(eta, conjugate(eta));
    best = std::min(best, volume_pairing(omega, sq).real());
  }
  return best;
}

SpCheck verify_sp_decomposition(const Form& omega, const std::vector<Form>& factors,
                                const std::vector<Rational>& weights) {
  SpCheck out;
  if (!weights.empty() && weights.size() != factors.size()) {
    out.reason = "weight count differs from factor count";
    return out;
  }
  Form sum(omega.dim());
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const Form& eta = factors[j];
    if (eta.dim() != omega.dim()) {
      out.failing_index = static_cast<int>(j);
      out.reason = "factor lives in a different frame";
      return out;
    }
    int p = -1;
    bool pure = true;
    for (const auto& [k, c] : eta.terms()) {
      if (k.second != 0 || (p >= 0 && degree(k.first) != p)) pure = false;
      p = degree(k.first);
    }
    if (!pure) {
      out.failing_index = static_cast<int>(j);
      out.reason = "factor is not a pure (p,0)-form";
      return out;
    }
    if (!is_simple(eta)) {
      out.failing_index = static_cast<int>(j);
      out.reason = "factor is not simple";
      return out;
    }
    if (!weights.empty() && sgn(weights[j]) < 0) {
      out.failing_index = static_cast<int>(j);
      out.reason = "negative weight";
      return out;
    }
    if (eta.is_zero()) continue;
    GaussianRational w = weights.empty() ? GaussianRational(1) : GaussianRational(weights[j]);
    sum += w * sigma(p) * wedge(eta, conjugate(eta));
  }
  if (sum != omega) {
    out.reason = "sum of squares differs from the form";
    return out;
  }
  out.ok = true;
  return out;
}

std::optional<SpWitness> sp_nonmembership_search(const FormF& omega, int budget, const OptimizerOptions& opts) {
  auto rep = hermitian_rep(omega);
  require_real(rep);
  const int n = rep.n, p = rep.p, k = n - p;
  const auto& pk = subsets(n, p);
  const auto& kk = subsets(n, k);
  double s = scale_of(rep.matrix);
  auto es = solve(rep.matrix / s);

  auto accept = [&](const FormF& psi) -> std::optional<SpWitness> {
    double f = volume_pairing(omega, psi).real();
    if (f >= -kZeroBand * s) return std::nullopt;
    auto verdict = check_transverse(psi, opts);
    if (verdict.status != Status::StrictlyIn && verdict.status != Status::In) return std::nullopt;
    return SpWitness{psi, f, verdict};
  };

  // A negative eigenvalue: the square sigma_k eta ^ conj(eta) of the g-dual of the
  // eigenvector is positive, hence weakly positive, and pairs to that eigenvalue.
  if (es.eigenvalues()(0) < -kZeroBand) {
    VectorXcd u = es.eigenvectors().col(0);
    FormF eta(n);
    for (std::size_t a = 0; a < pk.size(); ++a) {
      Mask Kc = complement(pk[a], n);
      eta.add(Kc, 0, static_cast<double>(merge_sign(pk[a], Kc)) * std::conj(u(a)));
    }
    FormF psi = sigma_f(k) * wedge(eta, conjugate(eta));
    if (auto w = accept(psi)) return w;
  }

  // Pairing matrix Q_IJ = f(Omega, sigma_k phi_I ^ bar_J). Try Psi = sigma_k (sum phi_I
  // bar_I - t W ^ conj W): weakly positive for t below 1/c with c the largest plane
  // value of sigma_k W ^ conj W, and pairing tr Q - t y^H Q y for y = conj(w).
  MatrixXcd Q(kk.size(), kk.size());
  for (std::size_t a = 0; a < kk.size(); ++a)
    for (std::size_t b = 0; b < kk.size(); ++b)
      Q(a, b) = volume_pairing(omega, FormF::monomial(n, kk[a], kk[b], sigma_f(k)));
  auto qs = solve(Q);
  double trQ = Q.trace().real();
  std::mt19937_64 rng(opts.seed ^ 0x5bd1e995ULL);
  std::normal_distribution<double> g;
  for (int attempt = 0; attempt < std::max(1, budget); ++attempt) {
    VectorXcd y;
    if (attempt == 0) {
      y = qs.eigenvectors().col(kk.size() - 1);
    } else {
      y = qs.eigenvectors().col(kk.size() - 1);
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += 0.3 * Complex(g(rng), g(rng));
      y.normalize();
    }
    VectorXcd w = y.conjugate();
    double q = (y.adjoint() * Q * y)(0, 0).real();
    if (q <= 0) continue;
    FormF Wsq(n);
    for (std::size_t a = 0; a < kk.size(); ++a)
      for (std::size_t b = 0; b < kk.size(); ++b)
        Wsq.add(kk[a], kk[b], -sigma_f(k) * w(a) * std::conj(w(b)));
    OptimizerOptions o = opts;
    o.seed = opts.seed + static_cast<std::uint64_t>(attempt);
    double c = -min_over_grassmannian(Wsq, o).value;
    if (c <= 0) continue;
    double t_lo = trQ / q, t_hi = 1.0 / c;
    if (!(t_lo < t_hi)) continue;
    double t = 0.5 * (t_lo + t_hi);
    FormF psi(n);
    for (std::size_t a = 0; a < kk.size(); ++a) psi.add(kk[a], kk[a], sigma_f(k));
    psi += t * Wsq;
    if (auto wit = accept(psi)) return wit;
  }
  return std::nullopt;
}

FormF invert_balanced(const FormF& Omega) {
  auto rep = hermitian_rep(Omega);
  require_real(rep);
  const int n = rep.n, p = rep.p;
  if (n < 2 || p != n - 1) throw std::invalid_argument("invert_balanced expects an (n-1,n-1)-form");
  auto es = solve(rep.matrix);
  double scale = scale_of(rep.matrix);
  if (es.eigenvalues()(0) <= kZeroBand * scale) throw std::invalid_argument("form is not strictly positive");
  // Psi_j = sum_i c_{j,i} phi_{N \ i}; recover psi_j = sum_i (-1)^i conj(c_{j,i}) phi_i.
  const auto& ks = subsets(n, p);
  MatrixXcd U(n, n);
  for (int j = 0; j < n; ++j)
    for (std::size_t a = 0; a < ks.size(); ++a) {
      int missing = std::countr_zero(complement(ks[a], n)) + 1;
      double sgn = (missing % 2) ? -1.0 : 1.0;
      U(j, missing - 1) = sgn * std::conj(es.eigenvectors()(a, j));
    }
  double logprod = 0;
  for (int j = 0; j < n; ++j) logprod += std::log(es.eigenvalues()(j));
  FormF omega(n);
  for (int j = 0; j < n; ++j) {
    double lambda = std::exp(logprod / (n - 1) - std::log(es.eigenvalues()(j)));
    FormF psi(n);
    for (int i = 0; i < n; ++i) psi.add(bit(i + 1), 0, U(j, i));
    omega += (lambda * sigma_f(1)) * wedge(psi, conjugate(psi));
  }
  // round-trip guarantee
  FormF power = wedge_power(omega, n - 1);
  double fact = 1;
  for (int r = 2; r < n; ++r) fact *= r;
  FormF target = fact * Omega;
  if (distance(power, target) > 1e-8 * std::max(1.0, max_abs(target)))
    throw std::runtime_error("eigenbasis is not expressible through a (1,0)-basis within tolerance");
  return omega;
}

Form standard_pp(int n, int p) {
  Form out(n);
  for (Mask I : subsets(n, p)) out.add(I, I, sigma(p));
  return out;
}

std::optional<Form> find_wp_interior_nonpositive(int n, int p, const OptimizerOptions& opts) {
  const int k = n - p;
  if (p < 2 || k < 2) return std::nullopt;  // cones coincide at p = 1, n - 1
  // Non-simple directions u = phi_I + phi_J with I, J disjoint. sigma_p (Id - t u u^H)
  // has eigenvalue 1 - 2t along u, so it leaves P for t > 1/2; it stays in WP-interior
  // while t c < 1, c the largest plane value of sigma_p U ^ conj U.
  const auto& ks = subsets(n, p);
  for (std::size_t a = 0; a < ks.size(); ++a)
    for (std::size_t b = a + 1; b < ks.size(); ++b) {
      if (ks[a] & ks[b]) continue;
      Form U = Form::monomial(n, ks[a], 0) + Form::monomial(n, ks[b], 0);
      if (is_simple(U)) continue;
      Form usq = sigma(p) * wedge(U, conjugate(U));
      double c = -min_over_grassmannian(to_float(-usq), opts).value;
      if (!(c > 0) || c >= 2.0) continue;
      Rational c_hi = rationalize(c, 100);
      Rational t = (Rational(1, 2) + Rational(1) / c_hi) / 2;
      if (!(t > Rational(1, 2)) || !(t * c_hi < 1)) continue;
      Form omega = standard_pp(n, p) - GaussianRational(t) * usq;
      FormF of = to_float(omega);
      auto pv = classify_P(of);
      auto wv = check_transverse(of, opts);
      if (pv.min_value < -1e-6 && wv.status == Status::StrictlyIn && wv.min_value > 1e-6) return omega;
    }
  return std::nullopt;
}

}  // namespace pkahler

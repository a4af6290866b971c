// Multistart projected-gradient minimization of V -> P(V)^T H conj(P(V)) over the
// Grassmannian of p-planes, P the Pluecker coordinates of an orthonormal frame V.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "pkahler/positivity.hpp"

namespace pkahler {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

MatrixXcd orthonormalize(const MatrixXcd& A) {
  Eigen::HouseholderQR<MatrixXcd> qr(A);
  MatrixXcd Q = qr.householderQ() * MatrixXcd::Identity(A.rows(), A.cols());
  return Q;
}

Complex small_det(const MatrixXcd& m) {
  if (m.rows() == 0) return 1.0;
  if (m.rows() == 1) return m(0, 0);
  if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m.partialPivLu().determinant();
}

struct Objective {
  int n, p;
  const MatrixXcd& H;
  const std::vector<Mask>& ks;
  std::vector<std::vector<int>> idx;

  Objective(int n_, int p_, const MatrixXcd& H_) : n(n_), p(p_), H(H_), ks(subsets(n_, p_)) {
    for (Mask K : ks) {
      auto v = indices(K);
      for (auto& x : v) --x;
      idx.push_back(v);
    }
  }

  VectorXcd plucker(const MatrixXcd& V) const {
    VectorXcd P(ks.size());
    MatrixXcd sub(p, p);
    for (std::size_t a = 0; a < ks.size(); ++a) {
      for (int r = 0; r < p; ++r) sub.row(r) = V.row(idx[a][r]);
      P(a) = small_det(sub);
    }
    return P;
  }

  double value(const MatrixXcd& V) const {
    VectorXcd P = plucker(V);
    return (P.transpose() * H * P.conjugate())(0, 0).real();
  }

  // Real gradient 2 df/d(conj V), projected off span(V).
  MatrixXcd gradient(const MatrixXcd& V, double* f) const {
    VectorXcd P = plucker(V);
    *f = (P.transpose() * H * P.conjugate())(0, 0).real();
    // w_J = sum_I P_I H_IJ
    VectorXcd w = H.transpose() * P;
    MatrixXcd G = MatrixXcd::Zero(n, p);
    MatrixXcd sub(p, p), minor(p - 1, p - 1);
    for (std::size_t J = 0; J < ks.size(); ++J) {
      if (std::abs(w(J)) == 0.0) continue;
      for (int r = 0; r < p; ++r) sub.row(r) = V.row(idx[J][r]);
      // cofactor C(r, b) = d det / d sub(r, b)
      for (int r = 0; r < p; ++r)
        for (int b = 0; b < p; ++b) {
          Complex cof;
          if (p == 1) {
            cof = 1.0;
          } else {
            for (int rr = 0, mr = 0; rr < p; ++rr) {
              if (rr == r) continue;
              for (int bb = 0, mb = 0; bb < p; ++bb) {
                if (bb == b) continue;
                minor(mr, mb++) = sub(rr, bb);
              }
              ++mr;
            }
            cof = small_det(minor);
            if ((r + b) & 1) cof = -cof;
          }
          G(idx[J][r], b) += 2.0 * w(J) * std::conj(cof);
        }
    }
    return G - V * (V.adjoint() * G);
  }
};

struct LocalResult {
  double value;
  MatrixXcd V;
};

LocalResult descend(const Objective& obj, MatrixXcd V, int max_iter, double scale) {
  double f = 0;
  double t = 0.5 / std::max(scale, 1e-300);
  for (int it = 0; it < max_iter; ++it) {
    MatrixXcd G = obj.gradient(V, &f);
    double gn = G.norm();
    if (gn < 1e-11 * std::max(scale, 1e-300)) break;
    bool moved = false;
    while (t * gn > 1e-15) {
      MatrixXcd Vn = orthonormalize(V - t * G);
      double fn = obj.value(Vn);
      if (fn < f) {
        V = std::move(Vn);
        moved = true;
        t *= 1.5;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return {obj.value(V), V};
}

bool lex_less_matrix(const MatrixXcd& a, const MatrixXcd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double ar = a.data()[i].real(), br = b.data()[i].real();
    if (ar != br) return ar < br;
    double ai = a.data()[i].imag(), bi = b.data()[i].imag();
    if (ai != bi) return ai < bi;
  }
  return false;
}

// Orthonormal basis of the orthogonal complement of span(W) in C^n.
MatrixXcd complement_frame(const MatrixXcd& W) {
  const auto n = W.rows(), k = W.cols();
  Eigen::HouseholderQR<MatrixXcd> qr(W);
  MatrixXcd Q = qr.householderQ();
  return Q.rightCols(n - k);
}

GrassmannResult run_multistart(int n, int p, const MatrixXcd& H, const OptimizerOptions& opts) {
  GrassmannResult res;
  const auto& ks = subsets(n, p);
  const int N = static_cast<int>(ks.size());
  // coordinate planes
  int best_coord = 0;
  for (int a = 1; a < N; ++a)
    if (H(a, a).real() < H(best_coord, best_coord).real()) best_coord = a;
  res.coordinate_min = H(best_coord, best_coord).real();
  auto coord_plane = [&](int a) {
    MatrixXcd V = MatrixXcd::Zero(n, p);
    auto id = indices(ks[a]);
    for (int c = 0; c < p; ++c) V(id[c] - 1, c) = 1.0;
    return V;
  };
  if (p == 0 || p == n) {
    res.value = H(0, 0).real();
    res.V = coord_plane(0);
    return res;
  }
  Objective obj(n, p, H);
  double scale = H.cwiseAbs().maxCoeff();
  const int R = std::max(1, opts.restarts);
  std::vector<LocalResult> results(R);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r; (r = next.fetch_add(1)) < R;) {
      MatrixXcd V0;
      if (r == 0) {
        V0 = coord_plane(best_coord);
      } else {
        std::mt19937_64 rng(splitmix(opts.seed ^ splitmix(static_cast<std::uint64_t>(r))));
        std::normal_distribution<double> g;
        MatrixXcd A(n, p);
        for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = Complex(g(rng), g(rng));
        V0 = orthonormalize(A);
      }
      results[r] = descend(obj, V0, opts.max_iter, scale);
    }
  };
  int workers = opts.threads > 0 ? opts.threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, R);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  int best = 0;
  for (int r = 0; r < R; ++r) {
    res.restart_values.push_back(results[r].value);
    res.restart_planes.push_back(results[r].V);
    if (results[r].value < results[best].value ||
        (results[r].value == results[best].value && lex_less_matrix(results[r].V, results[best].V)))
      best = r;
  }
  res.value = results[best].value;
  res.V = results[best].V;
  if (res.coordinate_min < res.value) {
    res.value = res.coordinate_min;
    res.V = coord_plane(best_coord);
  }
  return res;
}

}  // namespace

Eigen::VectorXcd plucker_f(const Eigen::MatrixXcd& V) {
  const int n = static_cast<int>(V.rows()), p = static_cast<int>(V.cols());
  MatrixXcd H = MatrixXcd::Zero(binomial(n, p), binomial(n, p));
  Objective obj(n, p, H);
  return obj.plucker(V);
}

// Hermitian matrix of the complementary problem: a k-plane W stands for the p-plane
// W-perp, with H'_{KL} = s(K^c) s(L^c) H_{L^c, K^c}, s the complement sign.
static MatrixXcd dual_matrix(int n, int p, const MatrixXcd& H) {
  const int k = n - p;
  const auto& kk = subsets(n, k);
  MatrixXcd D(kk.size(), kk.size());
  for (std::size_t a = 0; a < kk.size(); ++a) {
    Mask Kc = complement(kk[a], n);
    int sa = merge_sign(Kc, kk[a]);
    int ia = subset_position(n, Kc);
    for (std::size_t b = 0; b < kk.size(); ++b) {
      Mask Lc = complement(kk[b], n);
      int sb = merge_sign(Lc, kk[b]);
      int ib = subset_position(n, Lc);
      D(a, b) = static_cast<double>(sa * sb) * H(ib, ia);
    }
  }
  return D;
}

GrassmannResult min_over_grassmannian(const HermitianRep& rep, const OptimizerOptions& opts) {
  const int n = rep.n, p = rep.p, k = n - p;
  if (k < p) {
    MatrixXcd D = dual_matrix(n, p, rep.matrix);
    GrassmannResult r = run_multistart(n, k, D, opts);
    r.V = complement_frame(r.V);
    for (auto& W : r.restart_planes) W = complement_frame(W);
    // report the value recomputed on the original problem
    r.value = evaluate_on_plane(rep, r.V);
    return r;
  }
  return run_multistart(n, p, rep.matrix, opts);
}

GrassmannResult min_over_grassmannian(const FormF& omega, const OptimizerOptions& opts) {
  return min_over_grassmannian(hermitian_rep(omega), opts);
}

double evaluate_on_plane(const HermitianRep& rep, const Eigen::MatrixXcd& V) {
  if (V.rows() != rep.n || V.cols() != rep.p) throw std::invalid_argument("plane has the wrong shape");
  if (rep.p == 0) return rep.matrix(0, 0).real();
  MatrixXcd Q = orthonormalize(V);
  Objective obj(rep.n, rep.p, rep.matrix);
  return obj.value(Q);
}

double evaluate_on_plane(const FormF& omega, const Eigen::MatrixXcd& V) {
  return evaluate_on_plane(hermitian_rep(omega, static_cast<int>(V.cols())), V);
}

double sample_plane_min(const FormF& omega, int count, std::uint64_t seed) {
  auto rep = hermitian_rep(omega);
  std::mt19937_64 rng(splitmix(seed));
  std::normal_distribution<double> g;
  double best = INFINITY;
  Objective obj(rep.n, rep.p, rep.matrix);
  for (int t = 0; t < count; ++t) {
    MatrixXcd A(rep.n, rep.p);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = Complex(g(rng), g(rng));
    best = std::min(best, obj.value(orthonormalize(A)));
  }
  return best;
}

Eigen::MatrixXcd dual_hermitian(int n, int p, const Eigen::MatrixXcd& H) { return dual_matrix(n, p, H); }
Eigen::MatrixXcd complement_plane(const Eigen::MatrixXcd& W) { return complement_frame(W); }

}  // namespace pkahler

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pkahler/exterior.hpp"

namespace pkahler {

// Omega_{I,J} = coefficient(I, J) / sigma_p in lexicographic multi-index order.
struct HermitianRep {
  int n = 0;
  int p = 0;
  Eigen::MatrixXcd matrix;
};

// Degree p of a pure (p,p)-form; -1 for the zero form. Throws otherwise.
int pp_degree(const FormF& omega);

HermitianRep hermitian_rep(const FormF& omega, int p);
inline HermitianRep hermitian_rep(const FormF& omega) { return hermitian_rep(omega, pp_degree(omega)); }
FormF form_from_rep(const HermitianRep& rep);

// Largest deviation from Hermitian symmetry, relative to the largest entry.
double hermitian_defect(const HermitianRep& rep);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  std::vector<FormF> forms;    // Psi_j = sum_I u_j[I] phi_I
  Eigen::MatrixXcd vectors;    // columns u_j
};

EigenDecomposition eigen_decompose(const FormF& omega, int p);
inline EigenDecomposition eigen_decompose(const FormF& omega) { return eigen_decompose(omega, pp_degree(omega)); }

enum class Cone { SP, P, WP };
enum class Status { StrictlyIn, In, NotIn, Unknown };

const char* to_string(Cone c);
const char* to_string(Status s);

struct PlaneWitness {
  Eigen::MatrixXcd V;  // n x p, orthonormal columns
  double value = 0;
};

struct ConeVerdict {
  Cone cone = Cone::P;
  Status status = Status::Unknown;
  // True when the status is proved (eigenvalues, exact path); false when it rests on
  // multistart evidence alone.
  bool certified = false;
  double min_value = 0;
  std::optional<Eigen::VectorXcd> eigenvector;
  std::optional<PlaneWitness> plane;
  std::string evidence;
};

constexpr double kZeroBand = 1e-9;

ConeVerdict classify_P(const FormF& omega, double tol = kZeroBand);

// Omega(sigma_p^{-1} V ^ conj V) on the plane spanned by the columns of V (which are
// orthonormalized first).
double evaluate_on_plane(const FormF& omega, const Eigen::MatrixXcd& V);
double evaluate_on_plane(const HermitianRep& rep, const Eigen::MatrixXcd& V);

Eigen::VectorXcd plucker_f(const Eigen::MatrixXcd& V);

// Matrix of the complementary problem on k = n - p planes: its value at W equals the
// value of H at the orthogonal complement of W.
Eigen::MatrixXcd dual_hermitian(int n, int p, const Eigen::MatrixXcd& H);
// Orthonormal frame of the orthogonal complement of span(W).
Eigen::MatrixXcd complement_plane(const Eigen::MatrixXcd& W);

struct OptimizerOptions {
  int restarts = 64;
  int max_iter = 500;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency
};

struct GrassmannResult {
  double value = 0;
  Eigen::MatrixXcd V;
  std::vector<double> restart_values;  // local minimum reached by each restart
  std::vector<Eigen::MatrixXcd> restart_planes;
  double coordinate_min = 0;           // best coordinate plane
};

GrassmannResult min_over_grassmannian(const FormF& omega, const OptimizerOptions& opts);
GrassmannResult min_over_grassmannian(const HermitianRep& rep, const OptimizerOptions& opts);

// Strict weak positivity.
ConeVerdict check_transverse(const FormF& omega, const OptimizerOptions& opts, double tol = kZeroBand);

// Smallest value over `count` random planes (seeded).
double sample_plane_min(const FormF& omega, int count, std::uint64_t seed);

// Smallest f(Omega, sigma_k eta ^ conj eta) over random unit (k,0)-forms eta; negative
// exactly when Omega has a negative eigenvalue (given enough samples).
double sample_square_pairing_min(const FormF& omega, int count, std::uint64_t seed);

struct SpCheck {
  bool ok = false;
  int failing_index = -1;
  std::string reason;
};

// sigma_p sum_j w_j eta_j ^ conj(eta_j) == omega exactly, every eta_j simple, w_j >= 0
// (all weights 1 when `weights` is empty).
SpCheck verify_sp_decomposition(const Form& omega, const std::vector<Form>& factors,
                                const std::vector<Rational>& weights = {});

struct SpWitness {
  FormF psi;           // in WP^k
  double pairing = 0;  // f(Omega, Psi) < 0
  ConeVerdict psi_verdict;
};

std::optional<SpWitness> sp_nonmembership_search(const FormF& omega, int budget, const OptimizerOptions& opts);

// For strictly positive (n-1,n-1) Omega, a (1,1)-form w with w^{n-1} = (n-1)! Omega.
FormF invert_balanced(const FormF& Omega);

// Search for a form of WP^p interior with a negative eigenvalue: perturb the identity
// along a non-simple direction. Returns an exact form whose properties were confirmed
// with the given optimizer options.
std::optional<Form> find_wp_interior_nonpositive(int n, int p, const OptimizerOptions& opts);

// sigma_p sum_{|I|=p} phi_I ^ bar_I, which is w^p/p! for the standard Kaehler form w.
Form standard_pp(int n, int p);

}  // namespace pkahler

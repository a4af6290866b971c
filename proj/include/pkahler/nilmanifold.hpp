#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pkahler/exterior.hpp"

namespace pkahler {

// Structure equations of a complex nilmanifold: d_phi[k-1] = d phi_k, an invariant
// 2-form with (2,0) and (1,1) parts.
struct ManifoldSpec {
  std::string name;
  int n = 0;
  std::vector<Form> d_phi;
};

struct ValidationReport {
  bool valid = false;
  std::vector<std::string> violations;
  bool parallelizable = false;
  bool rational_structure = false;
};

ValidationReport validate(const ManifoldSpec& spec);
bool is_parallelizable(const ManifoldSpec& spec);
bool has_rational_structure(const ManifoldSpec& spec);

enum class Op { D, Del, DelBar };

// Leibniz extension of the structure equations to all invariant forms.
class Calculus {
 public:
  explicit Calculus(const ManifoldSpec& spec);

  int dim() const { return n_; }
  Form apply(Op op, const Form& f) const;
  Form d(const Form& f) const { return apply(Op::D, f); }
  Form del(const Form& f) const { return apply(Op::Del, f); }
  Form delbar(const Form& f) const { return apply(Op::DelBar, f); }
  // del delbar
  Form ddbar(const Form& f) const { return del(delbar(f)); }

 private:
  int n_;
  std::vector<Form> dphi_;     // d phi_k
  std::vector<Form> dphibar_;  // d bar_k
};

Form differential(const ManifoldSpec& spec, const Form& f, Op op);

// Invariant del-bar-closed (k,0)-forms.
std::vector<Form> holomorphic_space(const ManifoldSpec& spec, int k);

// beta ^ rho = F(beta, rho) phi_{1..n}; only for parallelizable specs.
GaussianRational F_pairing(const ManifoldSpec& spec, const Form& beta, const Form& rho);

struct PhkResult {
  Form omega;                       // sigma_p sum Psi_h ^ conj Psi_h
  std::vector<Form> factors;        // the Psi_h
  bool decomposition_simple = false;  // every Psi_h simple, so the factors are an SP certificate
  std::vector<Form> image_basis;    // basis of Im(d : Omega^{k-1} -> Omega^k)
};

PhkResult phk_construct(const ManifoldSpec& spec, int p);

struct SimpleExactOptions {
  long draws = 10000;
  std::uint64_t seed = 0;
  int exhaustive_max_dim = 3;
};

enum class SearchStatus { Found, CertifiedNone, ExistsNoWitness, Inconclusive };
const char* to_string(SearchStatus s);

struct SimpleExactResult {
  SearchStatus status = SearchStatus::Inconclusive;
  std::optional<Form> alpha;  // simple, alpha = del beta
  std::optional<Form> beta;   // holomorphic (k-1,0)-form
  int space_dim = 0;          // dim E_k
  std::string method;
};

// E_k = { del beta : beta invariant (k-1,0), delbar beta = 0, delbar del beta = 0 }.
struct ExactHolomorphicSpace {
  std::vector<Form> alphas;  // basis of E_k
  std::vector<Form> betas;   // alphas[j] = del betas[j]
};
ExactHolomorphicSpace exact_holomorphic_space(const ManifoldSpec& spec, int k);

SimpleExactResult find_simple_exact_holomorphic(const ManifoldSpec& spec, int k, const SimpleExactOptions& opts = {});

// Re-check of a witness: alpha != 0 simple (k,0), alpha = del beta, delbar beta = 0.
bool verify_simple_exact(const ManifoldSpec& spec, const Form& alpha, const Form& beta);

// Coefficient-vector helpers over a fixed list of monomial keys.
using KeyList = std::vector<std::pair<Mask, Mask>>;
KeyList bidegree_keys(int n, int a, int b);

}  // namespace pkahler

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pkahler/nilmanifold.hpp"
#include "pkahler/positivity.hpp"

namespace pkahler {

// Closure classes, strongest first: K => WK => S => PL at a fixed p.
enum class KClass { K, WK, S, PL };
const char* to_string(KClass c);
std::optional<KClass> class_from_string(const std::string& s);
inline constexpr KClass kAllClasses[] = {KClass::K, KClass::WK, KClass::S, KClass::PL};

// Real basis of the real (r,r)-forms: sigma_r phi_I bar_I, sigma_r (phi_I bar_J + phi_J bar_I)
// and i sigma_r (phi_I bar_J - phi_J bar_I) for I < J.
std::vector<Form> real_pp_basis(int n, int r);
// Coordinates of a real (r,r)-form in real_pp_basis.
std::vector<Rational> real_pp_coordinates(const Form& omega, int r);

// All invariant Omega satisfying the class's linear closure equations, together with
// auxiliary unknowns:
//   K:  d Omega = 0                              (no auxiliaries)
//   WK: del Omega = del delbar alpha              (alpha of bidegree (p,p-1))
//   S:  Psi = Omega + sum_{a>p} (Psi^{a,b} + conj) closed   (auxiliaries Psi^{a,b}, a>p)
//   PL: del delbar Omega = 0
struct ClosureSubspace {
  int n = 0;
  int p = 0;
  KClass cls = KClass::K;
  std::vector<Form> omegas;            // independent; Omega(x) = sum x_i omegas[i]
  std::vector<std::vector<Form>> aux;  // aux[i][b]: block b lifting omegas[i]
  std::vector<std::string> aux_labels;
  std::vector<int> pivots;  // real_pp coordinate read off for omegas[i]

  int parameter_count() const { return static_cast<int>(omegas.size()); }
};

ClosureSubspace closure_subspace(const ManifoldSpec& spec, int p, KClass cls);

// Auxiliaries making omega admissible, or nullopt when omega is not in the subspace.
std::optional<std::vector<Form>> lift(const ClosureSubspace& sub, const Form& omega);

// Exact re-check of the closure equations for (omega, aux) as laid out above.
bool verify_closure(const ManifoldSpec& spec, KClass cls, const Form& omega, const std::vector<Form>& aux);

// Psi = Omega + sum (aux + conj aux) for the S class.
Form assemble_closed_form(const Form& omega, const std::vector<Form>& aux);

enum class CertKind { BoundaryComponent, ClosedBoundaryComponent, Boundary, DdbarExact, SimpleExactHolomorphic };
const char* to_string(CertKind k);
std::optional<CertKind> cert_kind_from_string(const std::string& s);
CertKind cert_kind_for(KClass c);

// A strongly positive invariant (q,q)-form T, q = n - p, with a potential exhibiting the
// exactness that rules out the class at p:
//   BoundaryComponent        T = del conj(S) + delbar S,  S of bidegree (q,q-1)
//   ClosedBoundaryComponent  as above and del delbar S = 0
//   Boundary                 T = d R,  R real of degree 2q-1
//   DdbarExact               T = i del delbar A,  A real (q-1,q-1)
//   SimpleExactHolomorphic   T = sigma_q alpha ^ conj(alpha), alpha = del beta simple, delbar beta = 0
struct CurrentCertificate {
  CertKind kind = CertKind::DdbarExact;
  int p = 0;
  Form T;
  std::vector<Form> sp_factors;  // T = sigma_q sum w_j eta_j ^ conj(eta_j)
  std::vector<Rational> sp_weights;
  std::optional<Form> potential;  // S, R or A
  std::optional<Form> alpha, beta;
};

struct CertificateCheck {
  bool ok = false;
  std::string failure;
};

CertificateCheck verify_certificate(const ManifoldSpec& spec, const CurrentCertificate& cert);

// Exact decomposition T = sigma_q sum w_j eta_j ^ conj(eta_j) with simple eta_j, via an
// LDL* factorization of the Hermitian matrix of T. Nullopt when T is not positive or a
// factor is not simple.
std::optional<std::pair<std::vector<Form>, std::vector<Rational>>> exact_sp_decomposition(const Form& T);

// Potential for an exact T of the given kind (not SimpleExactHolomorphic), or nullopt
// when T is not in the image.
std::optional<Form> solve_potential(const ManifoldSpec& spec, int p, CertKind kind, const Form& T);

enum class Verdict { Yes, No, Unknown };
const char* to_string(Verdict v);

struct DecideOptions {
  int rounds = 50;
  OptimizerOptions optimizer;  // restarts per round
  double tol = 1e-7;
  bool parallelizable_shortcut = true;
  bool try_candidates = true;  // standard and holomorphic-square forms before the LP
  std::uint64_t seed = 0;
};

struct Decision {
  Verdict verdict = Verdict::Unknown;
  std::string method;
  std::optional<Form> omega;
  std::vector<Form> aux;
  std::optional<CurrentCertificate> cert;
  int rounds = 0;
  int witnesses = 0;
  double slack = 0;      // last LP optimum
  double plane_min = 0;  // Grassmannian minimum of the returned omega
  std::vector<double> trace;  // slack per round
};

Decision decide(const ManifoldSpec& spec, int p, KClass cls, const DecideOptions& opts = {});

struct Cell {
  Decision decision;
  std::optional<std::pair<int, KClass>> implied_from;  // verdict inherited from that cell
  std::string note;
};

struct ClassificationTable {
  std::string spec_name;
  int n = 0;
  std::map<std::pair<int, KClass>, Cell> cells;  // p in 1..n-1

  Verdict at(int p, KClass c) const;
};

ClassificationTable classification_table(const ManifoldSpec& spec, const DecideOptions& opts = {});

// Propagates Yes to weaker classes and to 1K => pK, 1S => pS; No the other way. Returns
// false when a Yes and a No would collide.
bool propagate_implications(ClassificationTable& table);

// No cell has Yes at a class with No at a weaker class of the same p.
bool table_consistent(const ClassificationTable& table);

}  // namespace pkahler

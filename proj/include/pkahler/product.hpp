#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pkahler/classifier.hpp"

namespace pkahler {

// X x Y with frame phi_1..phi_m, phi'_1..phi'_n (the latter stored as phi_{m+1}..phi_{m+n}).
struct ProductSpec {
  ManifoldSpec left, right, combined;
  int m = 0, n = 0;
};

ProductSpec product_spec(const ManifoldSpec& X, const ManifoldSpec& Y);

// Pullbacks through the two projections.
Form pull_left(const ProductSpec& P, const Form& f);
Form pull_right(const ProductSpec& P, const Form& f);

enum class Factor { Left, Right };

// Fiber integration onto `onto`: keeps the terms carrying the full volume multi-index of
// the other factor, strips it (with the reordering sign) and divides by sigma of the fiber
// dimension, so that pi_*(beta ^ dv_fiber) = beta. Throws when the degree is too low.
Form pushforward_projection(const ProductSpec& P, const Form& f, Factor onto);

// One rung of a ladder: a closed-class form of degree s on a factor, with the class's
// auxiliaries laid out as in Decision::aux.
struct LadderForm {
  int s = 0;
  Form omega;
  std::vector<Form> aux;
};

struct LadderInput {
  KClass cls = KClass::K;
  int p = 0, q = 0;               // left ladder covers p..m-1, right ladder q..n-1
  std::vector<LadderForm> left;   // s = p..m-1; the top volume form is added internally
  std::vector<LadderForm> right;  // s = q..n-1
};

struct LadderReport {
  bool ok = false;
  bool left_shorter = false;  // m - p <= n - q
  int j_min = 0, j_max = 0;   // admissible j: j_min <= j <= j_max
  std::vector<std::string> violations;
};

LadderReport check_ladder_hypotheses(const ProductSpec& P, const LadderInput& in);

struct ThetaForm {
  int j = 0;
  KClass cls = KClass::K;
  Form theta;
  std::vector<Form> aux;  // as in Decision::aux for cls
  std::vector<std::pair<int, int>> summands;  // (s, j - s)
};

// sum_s Omega_s ^ Phi_{j-s} over the ladder, with its closure auxiliaries.
ThetaForm theta_form(const ProductSpec& P, const LadderInput& in, int j);

// One factor Kaehler with closed transverse omega (of dimension a), the other with a ladder
// from q (dimension b): sum_{h <= k <= a} omega^k/k! ^ Phi_{j-k}, h = max(0, j - b), for
// a + q <= j < a + b.
ThetaForm theta_kahler(const ProductSpec& P, const Form& omega, KClass cls, int q, const std::vector<LadderForm>& ladder,
                       int j, Factor kahler_side = Factor::Left);

struct ThetaCheck {
  bool closure = false;
  Status positive = Status::Unknown;    // classify_P
  Status transverse = Status::Unknown;  // check_transverse
  double eigen_min = 0;
  double plane_min = 0;
  double sample_min = 0;
};

ThetaCheck check_theta(const ProductSpec& P, const ThetaForm& t, const OptimizerOptions& opts, int samples = 1000);

// Fills product cells from the factor tables: restriction to a factor (p below its
// dimension) and pushforward along a compact factor (p above its dimension). Existing Yes
// cells that contradict a factor are reported.
struct ImplicationReport {
  int filled = 0;
  std::vector<std::string> contradictions;
};
ImplicationReport factor_implications(const ClassificationTable& X, const ClassificationTable& Y,
                                      ClassificationTable& product);

struct ProductOptions {
  DecideOptions decide;
  OptimizerOptions positivity;  // for the ladder-form checks
  int samples = 1000;
  bool decide_remaining = false;  // run decide() on cells left Unknown
};

struct ProductTable {
  ProductSpec spec;
  ClassificationTable left, right, table;
  std::vector<ThetaForm> thetas;  // every ladder form placed in the table
  std::vector<std::string> contradictions;
};

ProductTable product_table(const ManifoldSpec& X, const ManifoldSpec& Y, const ProductOptions& opts = {});

// Ladder for `cls` on one factor, from the lowest s such that the factor is s-cls for all
// s up to dim - 1, with forms taken from the table (or recomputed when a cell holds only
// an implication). Nullopt when the factor is not (dim-1)-cls.
std::optional<std::pair<int, std::vector<LadderForm>>> ladder_from_table(const ManifoldSpec& spec,
                                                                         const ClassificationTable& t, KClass cls,
                                                                         const DecideOptions& opts = {});

}  // namespace pkahler

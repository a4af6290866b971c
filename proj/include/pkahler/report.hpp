#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "pkahler/product.hpp"

namespace pkahler::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// SHA-256 of the canonical spec text, hex.
std::string spec_digest(const ManifoldSpec& spec);

// [{"phi": [1, 2], "bar": [1], "c": "1/2 + 3/4 i"}, ...] in canonical term order.
Json form_to_json(const Form& f);
Form form_from_json(const Json& j, int n);
Json float_form_to_json(const FormF& f);  // coefficients as [re, im]

Json certificate_to_json(const CurrentCertificate& c);
CurrentCertificate certificate_from_json(const Json& j, int n);

Json spec_to_json(const ManifoldSpec& spec);
ManifoldSpec spec_from_json(const Json& j);  // checks the digest

Json options_to_json(const DecideOptions& opts);
DecideOptions options_from_json(const Json& j);

Json decision_to_json(int p, KClass cls, const Cell& cell);
Json table_to_json(const ClassificationTable& t);

std::string render_table(const ClassificationTable& t);

Json validate_report(const ManifoldSpec& spec, const ValidationReport& r);
Json classify_report(const ManifoldSpec& spec, const ClassificationTable& t, const DecideOptions& opts);
Json product_report(const ProductTable& t, const ProductOptions& opts);
Json theta_report(const ProductSpec& P, const LadderInput& in, const LadderReport& hyp, const ThetaForm& th,
                  const ThetaCheck& chk, const OptimizerOptions& opts);
Json invert_balanced_report(const Form& Omega, const FormF& omega, double residual);

struct VerifyResult {
  bool ok = true;
  int checked = 0;
  std::vector<std::string> failures;
};

// Re-checks every Yes/No cell of a classify or product report from its contents: exact
// closure and certificate checks, the recorded transversality check for emitted forms,
// implication sources, factor tables for product cells. No searches are rerun.
VerifyResult verify_report(const Json& report);

// Two-space indented, newline-terminated.
std::string dump(const Json& j);

}  // namespace pkahler::report

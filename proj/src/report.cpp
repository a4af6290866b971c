#include "pkahler/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "pkahler/spec_io.hpp"

namespace pkahler::report {

namespace {

std::vector<int> idx(Mask m) { return indices(m); }

Mask mask_of(const Json& a, int n) {
  Mask m = 0;
  for (const auto& v : a) {
    int i = v.get<int>();
    if (i < 1 || i > n) throw std::invalid_argument("index " + std::to_string(i) + " outside the frame");
    if (m & bit(i)) throw std::invalid_argument("repeated index " + std::to_string(i));
    m |= bit(i);
  }
  return m;
}

Rational rational_from(const std::string& s) {
  Rational q(s);
  q.canonicalize();
  return q;
}

Json cell_ref(int p, KClass c) { return Json{{"p", p}, {"class", to_string(c)}}; }

std::string cell_name(int p, KClass c) { return std::to_string(p) + to_string(c); }

}  // namespace

std::string spec_digest(const ManifoldSpec& spec) {
  const std::string text = print_spec(spec);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

Json form_to_json(const Form& f) {
  Json out = Json::array();
  // canonical order via the text printer's ordering: degree, holomorphic degree desc, lex
  std::vector<std::pair<std::pair<Mask, Mask>, GaussianRational>> terms(f.terms().begin(), f.terms().end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    const auto &x = a.first, &y = b.first;
    int dx = degree(x.first) + degree(x.second), dy = degree(y.first) + degree(y.second);
    if (dx != dy) return dx < dy;
    if (degree(x.first) != degree(y.first)) return degree(x.first) > degree(y.first);
    if (x.first != y.first) return lex_less(x.first, y.first);
    return lex_less(x.second, y.second);
  });
  for (const auto& [k, c] : terms) out.push_back(Json{{"phi", idx(k.first)}, {"bar", idx(k.second)}, {"c", c.to_string()}});
  return out;
}

Form form_from_json(const Json& j, int n) {
  Form f(n);
  for (const auto& t : j) f.add(mask_of(t.at("phi"), n), mask_of(t.at("bar"), n), parse_gaussian(t.at("c").get<std::string>()));
  return f;
}

Json float_form_to_json(const FormF& f) {
  Json out = Json::array();
  for (const auto& [k, c] : f.terms())
    out.push_back(Json{{"phi", idx(k.first)}, {"bar", idx(k.second)}, {"c", {c.real(), c.imag()}}});
  return out;
}

Json certificate_to_json(const CurrentCertificate& c) {
  Json j{{"kind", to_string(c.kind)}, {"p", c.p}, {"T", form_to_json(c.T)}};
  Json fs = Json::array(), ws = Json::array();
  for (const auto& f : c.sp_factors) fs.push_back(form_to_json(f));
  for (const auto& w : c.sp_weights) ws.push_back(w.get_str());
  j["sp_factors"] = fs;
  j["sp_weights"] = ws;
  if (c.potential) j["potential"] = form_to_json(*c.potential);
  if (c.alpha) j["alpha"] = form_to_json(*c.alpha);
  if (c.beta) j["beta"] = form_to_json(*c.beta);
  return j;
}

CurrentCertificate certificate_from_json(const Json& j, int n) {
  CurrentCertificate c;
  auto kind = cert_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown certificate kind");
  c.kind = *kind;
  c.p = j.at("p").get<int>();
  c.T = form_from_json(j.at("T"), n);
  for (const auto& f : j.at("sp_factors")) c.sp_factors.push_back(form_from_json(f, n));
  for (const auto& w : j.at("sp_weights")) c.sp_weights.push_back(rational_from(w.get<std::string>()));
  if (j.contains("potential")) c.potential = form_from_json(j["potential"], n);
  if (j.contains("alpha")) c.alpha = form_from_json(j["alpha"], n);
  if (j.contains("beta")) c.beta = form_from_json(j["beta"], n);
  return c;
}

Json spec_to_json(const ManifoldSpec& spec) {
  return Json{{"name", spec.name}, {"dimension", spec.n}, {"text", print_spec(spec)}, {"sha256", spec_digest(spec)}};
}

ManifoldSpec spec_from_json(const Json& j) {
  auto spec = parse_spec(j.at("text").get<std::string>());
  if (spec_digest(spec) != j.at("sha256").get<std::string>()) throw std::invalid_argument("spec digest mismatch");
  return spec;
}

Json options_to_json(const DecideOptions& o) {
  return Json{{"seed", o.seed},
              {"rounds", o.rounds},
              {"restarts", o.optimizer.restarts},
              {"max_iter", o.optimizer.max_iter},
              {"optimizer_seed", o.optimizer.seed},
              {"tol", o.tol},
              {"parallelizable_shortcut", o.parallelizable_shortcut},
              {"try_candidates", o.try_candidates}};
}

DecideOptions options_from_json(const Json& j) {
  DecideOptions o;
  o.seed = j.at("seed").get<std::uint64_t>();
  o.rounds = j.at("rounds").get<int>();
  o.optimizer.restarts = j.at("restarts").get<int>();
  o.optimizer.max_iter = j.at("max_iter").get<int>();
  o.optimizer.seed = j.at("optimizer_seed").get<std::uint64_t>();
  o.tol = j.at("tol").get<double>();
  o.parallelizable_shortcut = j.at("parallelizable_shortcut").get<bool>();
  o.try_candidates = j.at("try_candidates").get<bool>();
  return o;
}

Json decision_to_json(int p, KClass cls, const Cell& cell) {
  const auto& d = cell.decision;
  Json j = cell_ref(p, cls);
  j["verdict"] = to_string(d.verdict);
  j["method"] = d.method;
  if (cell.implied_from) j["implied_from"] = cell_ref(cell.implied_from->first, cell.implied_from->second);
  if (!cell.note.empty()) j["note"] = cell.note;
  if (d.omega) {
    j["omega"] = form_to_json(*d.omega);
    Json aux = Json::array();
    for (const auto& a : d.aux) aux.push_back(form_to_json(a));
    j["aux"] = aux;
    j["plane_min"] = d.plane_min;
  }
  if (d.cert) j["certificate"] = certificate_to_json(*d.cert);
  if (d.rounds || !d.trace.empty())
    j["trace"] = Json{{"rounds", d.rounds}, {"witnesses", d.witnesses}, {"slack", d.slack}, {"slack_per_round", d.trace}};
  return j;
}

Json table_to_json(const ClassificationTable& t) {
  Json cells = Json::array();
  for (int p = 1; p < t.n; ++p)
    for (KClass c : kAllClasses) {
      auto it = t.cells.find({p, c});
      if (it != t.cells.end()) cells.push_back(decision_to_json(p, c, it->second));
    }
  return Json{{"name", t.spec_name}, {"n", t.n}, {"cells", cells}};
}

std::string render_table(const ClassificationTable& t) {
  std::ostringstream os;
  os << t.spec_name << " (n = " << t.n << ")\n";
  os << std::left << std::setw(4) << "p";
  for (KClass c : kAllClasses) os << std::setw(9) << to_string(c);
  os << "\n";
  for (int p = 1; p < t.n; ++p) {
    bool any = false;
    for (KClass c : kAllClasses) any |= t.cells.count({p, c}) > 0;
    if (!any) continue;
    os << std::setw(4) << p;
    for (KClass c : kAllClasses) os << std::setw(9) << (t.cells.count({p, c}) ? to_string(t.at(p, c)) : "-");
    os << "\n";
  }
  for (int p = 1; p < t.n; ++p)
    for (KClass c : kAllClasses) {
      auto it = t.cells.find({p, c});
      if (it == t.cells.end()) continue;
      os << "  " << cell_name(p, c) << ": " << to_string(it->second.decision.verdict) << ", "
         << it->second.decision.method;
      if (!it->second.note.empty()) os << " [" << it->second.note << "]";
      os << "\n";
    }
  return os.str();
}

namespace {

Json header(const std::string& command) {
  return Json{{"tool", "pkahler"}, {"version", kToolVersion}, {"schema", kSchemaVersion}, {"command", command}};
}

}  // namespace

Json validate_report(const ManifoldSpec& spec, const ValidationReport& r) {
  Json j = header("validate");
  j["spec"] = spec_to_json(spec);
  j["valid"] = r.valid;
  j["violations"] = r.violations;
  j["parallelizable"] = r.parallelizable;
  j["rational_structure"] = r.rational_structure;
  std::string human = spec.name + ": " + (r.valid ? "valid" : "invalid") + "\n";
  for (const auto& v : r.violations) human += "  " + v + "\n";
  j["human"] = human;
  return j;
}

Json classify_report(const ManifoldSpec& spec, const ClassificationTable& t, const DecideOptions& opts) {
  Json j = header("classify");
  j["options"] = options_to_json(opts);
  j["spec"] = spec_to_json(spec);
  j["table"] = table_to_json(t);
  j["human"] = render_table(t);
  return j;
}

Json product_report(const ProductTable& t, const ProductOptions& opts) {
  Json j = header("product");
  j["options"] = options_to_json(opts.decide);
  j["positivity"] = Json{{"restarts", opts.positivity.restarts}, {"seed", opts.positivity.seed}};
  j["left"] = Json{{"spec", spec_to_json(t.spec.left)}, {"table", table_to_json(t.left)}};
  j["right"] = Json{{"spec", spec_to_json(t.spec.right)}, {"table", table_to_json(t.right)}};
  j["spec"] = spec_to_json(t.spec.combined);
  j["table"] = table_to_json(t.table);
  j["contradictions"] = t.contradictions;
  j["human"] = render_table(t.left) + render_table(t.right) + render_table(t.table);
  return j;
}

Json theta_report(const ProductSpec& P, const LadderInput& in, const LadderReport& hyp, const ThetaForm& th,
                  const ThetaCheck& chk, const OptimizerOptions& opts) {
  Json j = header("theta");
  j["positivity"] = Json{{"restarts", opts.restarts}, {"seed", opts.seed}};
  j["left"] = Json{{"spec", spec_to_json(P.left)}};
  j["right"] = Json{{"spec", spec_to_json(P.right)}};
  j["spec"] = spec_to_json(P.combined);
  j["class"] = to_string(th.cls);
  j["p"] = in.p;
  j["q"] = in.q;
  j["j"] = th.j;
  j["hypotheses"] = Json{{"ok", hyp.ok},
                         {"left_shorter", hyp.left_shorter},
                         {"j_min", hyp.j_min},
                         {"j_max", hyp.j_max},
                         {"violations", hyp.violations}};
  Json summands = Json::array();
  for (auto [s, k] : th.summands) summands.push_back({s, k});
  j["summands"] = summands;
  j["theta"] = form_to_json(th.theta);
  Json aux = Json::array();
  for (const auto& a : th.aux) aux.push_back(form_to_json(a));
  j["aux"] = aux;
  j["check"] = Json{{"closure", chk.closure},
                    {"positive", to_string(chk.positive)},
                    {"transverse", to_string(chk.transverse)},
                    {"eigen_min", chk.eigen_min},
                    {"plane_min", chk.plane_min},
                    {"sample_min", chk.sample_min}};
  const bool yes = chk.closure && chk.transverse == Status::StrictlyIn;
  j["verdict"] = yes ? "Yes" : "Unknown";
  std::ostringstream h;
  h << P.combined.name << ": Theta_" << th.j << " for " << to_string(th.cls);
  if (in.p > 0) h << " from ladders starting at p = " << in.p << ", q = " << in.q;
  else h << " from a Kaehler factor and a ladder starting at " << in.q;
  h << "\n  summands:";
  for (auto [s, k] : th.summands) h << " (" << s << "," << k << ")";
  h << "\n  closure " << (chk.closure ? "exact" : "FAILS") << ", P " << to_string(chk.positive) << ", transverse "
    << to_string(chk.transverse) << " (plane min " << chk.plane_min << ")\n  " << th.j << to_string(th.cls) << ": "
    << (yes ? "Yes" : "Unknown") << "\n";
  j["human"] = h.str();
  return j;
}

Json invert_balanced_report(const Form& Omega, const FormF& omega, double residual) {
  Json j = header("invert-balanced");
  j["input"] = Json{{"dimension", Omega.dim()}, {"form", form_to_json(Omega)}};
  j["omega"] = float_form_to_json(omega);
  j["residual"] = residual;
  std::ostringstream h;
  h << "omega with omega^" << Omega.dim() - 1 << " = " << Omega.dim() - 1 << "! Omega, relative residual " << residual
    << "\n";
  for (const auto& [k, c] : omega.terms()) {
    h << "  (" << c.real() << (c.imag() < 0 ? " - " : " + ") << std::abs(c.imag()) << " i)";
    for (int i : indices(k.first)) h << " phi" << i;
    for (int i : indices(k.second)) h << " bar" << i;
    h << "\n";
  }
  j["human"] = h.str();
  return j;
}

namespace {

struct TableCheck {
  const ManifoldSpec& spec;
  const ClassificationTable& table;
  const DecideOptions& opts;
  // product cells may rest on the factor tables
  const ClassificationTable* left = nullptr;
  const ClassificationTable* right = nullptr;
  VerifyResult& out;

  void fail(int p, KClass c, const std::string& why) {
    out.ok = false;
    out.failures.push_back(table.spec_name + " " + cell_name(p, c) + ": " + why);
  }

  bool implication_valid(int p, KClass c, Verdict v, int fp, KClass fc) const {
    if (table.at(fp, fc) != v) return false;
    const int a = static_cast<int>(c), b = static_cast<int>(fc);
    if (fp == p) return v == Verdict::Yes ? b < a : b > a;
    if (fc != c || (c != KClass::K && c != KClass::S)) return false;
    return v == Verdict::Yes ? (fp == 1 && p > 1) : (p == 1 && fp > 1);
  }

  bool factor_rule(int p, KClass c) const {
    if (!left || !right) return false;
    const int m = left->n, n = right->n;
    return (p < m && left->at(p, c) == Verdict::No) || (p < n && right->at(p, c) == Verdict::No) ||
           (p > n && p - n < m && left->at(p - n, c) == Verdict::No) ||
           (p > m && p - m < n && right->at(p - m, c) == Verdict::No);
  }

  void run() {
    for (const auto& [key, cell] : table.cells) {
      const auto [p, c] = key;
      const auto& d = cell.decision;
      if (d.verdict == Verdict::Unknown) continue;
      ++out.checked;
      if (d.verdict == Verdict::Yes) {
        if (d.omega) {
          if (!verify_closure(spec, c, *d.omega, d.aux)) fail(p, c, "closure equations fail");
          auto v = check_transverse(to_float(*d.omega), opts.optimizer, opts.tol);
          if (v.status != Status::StrictlyIn) fail(p, c, std::string("transversality: ") + to_string(v.status));
        } else if (cell.implied_from) {
          if (!implication_valid(p, c, Verdict::Yes, cell.implied_from->first, cell.implied_from->second))
            fail(p, c, "implication source does not support Yes");
        } else if (!(p == spec.n - 1 && c == KClass::PL)) {
          fail(p, c, "Yes without a form");
        }
      } else {
        if (d.cert) {
          if (d.cert->p != p) fail(p, c, "certificate for another p");
          auto r = verify_certificate(spec, *d.cert);
          if (!r.ok) fail(p, c, "certificate: " + r.failure);
        } else if (cell.implied_from) {
          if (!implication_valid(p, c, Verdict::No, cell.implied_from->first, cell.implied_from->second))
            fail(p, c, "implication source does not support No");
        } else if (!factor_rule(p, c)) {
          fail(p, c, "No without a certificate");
        }
      }
    }
  }
};

ClassificationTable table_from_json(const Json& j, int n) {
  ClassificationTable t;
  t.spec_name = j.at("name").get<std::string>();
  t.n = j.at("n").get<int>();
  for (const auto& c : j.at("cells")) {
    const int p = c.at("p").get<int>();
    auto cls = class_from_string(c.at("class").get<std::string>());
    if (!cls) throw std::invalid_argument("unknown class in report");
    Cell cell;
    const std::string v = c.at("verdict").get<std::string>();
    cell.decision.verdict = v == "Yes" ? Verdict::Yes : v == "No" ? Verdict::No : Verdict::Unknown;
    cell.decision.method = c.at("method").get<std::string>();
    if (c.contains("implied_from")) {
      auto fc = class_from_string(c["implied_from"].at("class").get<std::string>());
      if (!fc) throw std::invalid_argument("unknown class in report");
      cell.implied_from = std::make_pair(c["implied_from"].at("p").get<int>(), *fc);
    }
    if (c.contains("note")) cell.note = c["note"].get<std::string>();
    if (c.contains("omega")) {
      cell.decision.omega = form_from_json(c["omega"], n);
      for (const auto& a : c.at("aux")) cell.decision.aux.push_back(form_from_json(a, n));
    }
    if (c.contains("certificate")) cell.decision.cert = certificate_from_json(c["certificate"], n);
    t.cells[{p, *cls}] = cell;
  }
  return t;
}

}  // namespace

VerifyResult verify_report(const Json& r) {
  VerifyResult out;
  auto bad = [&](const std::string& why) {
    out.ok = false;
    out.failures.push_back(why);
  };
  try {
    const std::string cmd = r.at("command").get<std::string>();
    if (r.at("tool") != "pkahler") bad("not a pkahler report");
    if (cmd == "classify") {
      auto spec = spec_from_json(r.at("spec"));
      auto opts = options_from_json(r.at("options"));
      auto t = table_from_json(r.at("table"), spec.n);
      TableCheck{spec, t, opts, nullptr, nullptr, out}.run();
    } else if (cmd == "product") {
      auto opts = options_from_json(r.at("options"));
      auto X = spec_from_json(r.at("left").at("spec"));
      auto Y = spec_from_json(r.at("right").at("spec"));
      auto P = product_spec(X, Y);
      if (spec_digest(P.combined) != spec_digest(spec_from_json(r.at("spec")))) bad("product spec is not X x Y");
      auto tl = table_from_json(r.at("left").at("table"), X.n);
      auto tr = table_from_json(r.at("right").at("table"), Y.n);
      auto t = table_from_json(r.at("table"), P.combined.n);
      TableCheck{X, tl, opts, nullptr, nullptr, out}.run();
      TableCheck{Y, tr, opts, nullptr, nullptr, out}.run();
      TableCheck{P.combined, t, opts, &tl, &tr, out}.run();
    } else if (cmd == "theta") {
      auto X = spec_from_json(r.at("left").at("spec"));
      auto Y = spec_from_json(r.at("right").at("spec"));
      auto P = product_spec(X, Y);
      auto cls = class_from_string(r.at("class").get<std::string>());
      if (!cls) throw std::invalid_argument("unknown class");
      Form theta = form_from_json(r.at("theta"), P.combined.n);
      std::vector<Form> aux;
      for (const auto& a : r.at("aux")) aux.push_back(form_from_json(a, P.combined.n));
      ++out.checked;
      if (r.at("verdict") == "Yes") {
        if (!verify_closure(P.combined, *cls, theta, aux)) bad("Theta closure equations fail");
        OptimizerOptions o;
        o.restarts = r.at("positivity").at("restarts").get<int>();
        o.seed = r.at("positivity").at("seed").get<std::uint64_t>();
        auto v = check_transverse(to_float(theta), o);
        if (v.status != Status::StrictlyIn) bad(std::string("Theta transversality: ") + to_string(v.status));
      }
    } else {
      bad("nothing to verify in a '" + cmd + "' report");
    }
  } catch (const std::exception& e) {
    bad(std::string("malformed report: ") + e.what());
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace pkahler::report

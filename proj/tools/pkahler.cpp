#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pkahler/catalog.hpp"
#include "pkahler/report.hpp"
#include "pkahler/spec_io.hpp"

using namespace pkahler;
namespace rep = pkahler::report;

namespace {

enum Exit { kYes = 0, kNo = 1, kInput = 2, kUnknown = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  const char* s = std::getenv("PKAHLER_SEED");
  if (!s || !*s) return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw InputError(std::string("PKAHLER_SEED is not an unsigned integer: ") + s);
  }
}

// write to a sibling temp file, then rename over the target
void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp);
    out << text;
    if (!out.flush()) throw InputError("cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move report into place: " + ec.message());
  }
}

struct Output {
  std::string out_path;
  bool json = false;

  void add(CLI::App* cmd) {
    cmd->add_option("-o,--out", out_path, "Write the JSON report to this file");
    cmd->add_flag("--json", json, "Print the JSON report instead of the table");
  }
  void emit(const rep::Json& r) const {
    if (!out_path.empty()) write_atomic(out_path, rep::dump(r));
    if (json) std::cout << rep::dump(r);
    else std::cout << r.value("human", std::string());
  }
};

ManifoldSpec load(const std::string& name) {
  ManifoldSpec s;
  try {
    s = load_spec(name);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  auto v = validate(s);
  if (!v.valid) {
    std::string msg = s.name + " is not a valid nilmanifold spec";
    for (const auto& x : v.violations) msg += "\n  " + x;
    throw InputError(msg);
  }
  return s;
}

KClass parse_class(const std::string& c) {
  auto k = class_from_string(c);
  if (!k) throw InputError("unknown class '" + c + "' (expected K, WK, S or PL)");
  return *k;
}

int exit_for(Verdict v) { return v == Verdict::Yes ? kYes : v == Verdict::No ? kNo : kUnknown; }

int table_exit(const ClassificationTable& t) {
  if (t.cells.size() == 1) return exit_for(t.cells.begin()->second.decision.verdict);
  for (const auto& [k, c] : t.cells)
    if (c.decision.verdict == Verdict::Unknown) return kUnknown;
  return kYes;
}

ClassificationTable factor_table(const ManifoldSpec& s, const DecideOptions& o) {
  if (s.n > 1) return classification_table(s, o);
  return ClassificationTable{s.name, s.n, {}};
}

std::optional<Form> kaehler_form(const ManifoldSpec& s, const ClassificationTable& t, const DecideOptions& o) {
  if (s.n == 1) return standard_pp(1, 1);
  if (t.at(1, KClass::K) != Verdict::Yes) return std::nullopt;
  const auto& d = t.cells.at({1, KClass::K}).decision;
  if (d.omega) return *d.omega;
  return decide(s, 1, KClass::K, o).omega;
}

// Balanced product through the sum of the pulled back Kaehler form of one factor and the
// (1,1)-form inverting the other factor's balanced form. Agrees with theta off the fiber
// volume term, which is closed on its own.
rep::Json sum_path(const ProductSpec& P, Factor kside, const Form& omega_k, const Form& Omega_b, const Form& theta,
                   const OptimizerOptions& opts) {
  const int N = P.m + P.n;
  FormF wb = invert_balanced(to_float(Omega_b));
  FormF wk = to_float(omega_k);
  FormF lifted = kside == Factor::Left ? shift_frame(wk, 0, N) + shift_frame(wb, P.m, N)
                                       : shift_frame(wb, 0, N) + shift_frame(wk, P.m, N);
  FormF power = wedge_power(lifted, N - 1);
  double fact = 1;
  for (int r = 2; r < N; ++r) fact *= r;
  power = (1.0 / fact) * power;
  const int b = kside == Factor::Left ? P.n : P.m;
  const Mask fiber = kside == Factor::Left ? ((Mask(1) << b) - 1) << P.m : (Mask(1) << b) - 1;
  FormF diff = power - to_float(theta);
  FormF off(N);
  for (const auto& [k, c] : diff.terms())
    if (k.first != fiber || k.second != fiber) off.add(k.first, k.second, c);
  auto tv = check_transverse(power, opts);
  return rep::Json{{"difference_off_fiber_volume", max_abs(off)},
                   {"transverse", to_string(tv.status)},
                   {"plane_min", tv.min_value}};
}

int cmd_product_theta(const std::string& l, const std::string& r, int j, KClass cls, const ProductOptions& po,
                      const Output& out) {
  auto X = load(l), Y = load(r);
  ProductSpec P;
  try {
    P = product_spec(X, Y);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const int N = P.m + P.n;
  if (j < 1 || j >= N) throw InputError("j = " + std::to_string(j) + " outside 1.." + std::to_string(N - 1));
  auto tl = factor_table(X, po.decide), tr = factor_table(Y, po.decide);
  auto lx = P.m > 1 ? ladder_from_table(X, tl, cls, po.decide) : std::nullopt;
  auto ly = P.n > 1 ? ladder_from_table(Y, tr, cls, po.decide) : std::nullopt;

  LadderInput in{cls, lx ? lx->first : 0, ly ? ly->first : 0, {}, {}};
  LadderReport hyp;
  ThetaForm th;
  std::string path;
  std::optional<std::pair<Factor, Form>> kfac;
  try {
    if (lx && ly) {
      in.left = lx->second;
      in.right = ly->second;
      hyp = check_ladder_hypotheses(P, in);
      th = theta_form(P, in, j);
      path = "ladder product form";
    } else {
      auto kx = kaehler_form(X, tl, po.decide), ky = kaehler_form(Y, tr, po.decide);
      if (kx && ly) kfac.emplace(Factor::Left, *kx);
      else if (ky && lx) kfac.emplace(Factor::Right, *ky);
      if (!kfac) {
        std::cerr << "no product construction applies: " << (lx ? "" : X.name + " ") << (ly ? "" : Y.name + " ")
                  << "has no " << to_string(cls) << " ladder up to its top degree and neither side pairs a Kaehler"
                  << " factor with a ladder\n";
        return kUnknown;
      }
      const auto& lad = kfac->first == Factor::Left ? *ly : *lx;
      in.q = lad.first;
      in.p = 0;
      hyp.ok = true;
      const int a = kfac->first == Factor::Left ? P.m : P.n, b = kfac->first == Factor::Left ? P.n : P.m;
      hyp.j_min = a + lad.first;
      hyp.j_max = a + b - 1;
      th = theta_kahler(P, kfac->second, cls, lad.first, lad.second, j, kfac->first);
      path = "Kaehler factor " + (kfac->first == Factor::Left ? X.name : Y.name);
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("refused: ") + e.what());
  }
  auto chk = check_theta(P, th, po.positivity, po.samples);
  auto report = rep::theta_report(P, in, hyp, th, chk, po.positivity);
  report["path"] = path;
  if (kfac && cls == KClass::K && j == N - 1) {
    const auto& lad = kfac->first == Factor::Left ? *ly : *lx;
    const auto& top = lad.second.back();
    if (top.s == (kfac->first == Factor::Left ? P.n : P.m) - 1) {
      auto cmp = sum_path(P, kfac->first, kfac->second, top.omega, th.theta, po.positivity);
      report["sum_path"] = cmp;
      std::ostringstream h;
      h << report["human"].get<std::string>() << "  sum of pulled back (1,1)-forms: difference off the fiber volume "
        << cmp["difference_off_fiber_volume"].get<double>() << ", transverse " << cmp["transverse"].get<std::string>()
        << "\n";
      report["human"] = h.str();
    }
  }
  out.emit(report);
  return report["verdict"] == "Yes" ? kYes : kUnknown;
}

int run(int argc, char** argv) {
  CLI::App app{"Generalized p-Kaehler properties of complex nilmanifolds"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  bool seed_given = false;
  int budget = -1, restarts = -1;

  auto add_search = [&](CLI::App* cmd) {
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t s) { seed = s, seed_given = true; }, "Random seed (default $PKAHLER_SEED or 0)");
    cmd->add_option("--budget", budget, "Cutting-plane rounds per cell")->check(CLI::PositiveNumber);
    cmd->add_option("--restarts", restarts, "Optimizer restarts per round")->check(CLI::PositiveNumber);
  };
  auto decide_options = [&] {
    DecideOptions o;
    if (!seed_given) seed = default_seed();
    o.seed = seed;
    o.optimizer.seed = seed;
    if (budget > 0) o.rounds = budget;
    if (restarts > 0) o.optimizer.restarts = restarts;
    return o;
  };

  std::string spec_arg, left, right, file;
  int p = 0, j = 0;
  std::string cls_arg;
  Output out;

  auto* v = app.add_subcommand("validate", "Parse and validate a spec");
  v->add_option("spec", spec_arg, "Catalog name or spec file")->required();
  out.add(v);

  auto* pr = app.add_subcommand("print", "Print a spec in canonical form");
  pr->add_option("spec", spec_arg, "Catalog name or spec file")->required();

  auto* cat = app.add_subcommand("catalog", "List the built-in manifolds");

  auto* cl = app.add_subcommand("classify", "Decide pK/pWK/pS/pPL with certificates");
  cl->add_option("spec", spec_arg, "Catalog name or spec file")->required();
  cl->add_option("--p", p, "Only this p")->check(CLI::PositiveNumber);
  cl->add_option("--class", cls_arg, "Only this class (K, WK, S, PL)");
  add_search(cl);
  out.add(cl);

  auto* pd = app.add_subcommand("product", "Classify X x Y, or build the product form at --j");
  pd->add_option("left", left, "Left factor")->required();
  pd->add_option("right", right, "Right factor")->required();
  auto* jopt = pd->add_option("--j", j, "Degree of the product form");
  pd->add_option("--class", cls_arg, "Class of the product form")->needs(jopt);
  jopt->needs(pd->get_option("--class"));
  bool remaining = false;
  pd->add_flag("--decide-remaining", remaining, "Run the single-manifold search on cells left open");
  add_search(pd);
  out.add(pd);

  auto* ib = app.add_subcommand("invert-balanced", "(1,1)-form w with w^{n-1}/(n-1)! = the given form");
  ib->add_option("form", file, "Form file")->required()->check(CLI::ExistingFile);
  out.add(ib);

  auto* vf = app.add_subcommand("verify", "Re-check the certificates and forms of a report");
  vf->add_option("report", file, "JSON report")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInput;
  }

  if (*cat) {
    for (const auto& n : catalog::names()) std::cout << n << "\n";
    return kYes;
  }
  if (*pr) {
    std::cout << print_spec(load(spec_arg));
    return kYes;
  }
  if (*v) {
    ManifoldSpec s;
    try {
      s = load_spec(spec_arg);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
    auto r = validate(s);
    out.emit(rep::validate_report(s, r));
    return r.valid ? kYes : kInput;
  }
  if (*cl) {
    auto s = load(spec_arg);
    auto o = decide_options();
    std::optional<KClass> only;
    if (!cls_arg.empty()) only = parse_class(cls_arg);
    if (p && p >= s.n) throw InputError("p = " + std::to_string(p) + " outside 1.." + std::to_string(s.n - 1));
    ClassificationTable t;
    if (!p && !only) {
      t = classification_table(s, o);
    } else {
      t.spec_name = s.name;
      t.n = s.n;
      for (int q = 1; q < s.n; ++q)
        for (KClass c : kAllClasses)
          if ((!p || q == p) && (!only || c == *only)) t.cells[{q, c}] = Cell{decide(s, q, c, o), std::nullopt, ""};
    }
    out.emit(rep::classify_report(s, t, o));
    return table_exit(t);
  }
  if (*pd) {
    ProductOptions po;
    po.decide = decide_options();
    po.positivity = po.decide.optimizer;
    po.positivity.restarts = std::max(po.positivity.restarts, 256);
    po.decide_remaining = remaining;
    if (!cls_arg.empty()) return cmd_product_theta(left, right, j, parse_class(cls_arg), po, out);
    auto X = load(left), Y = load(right);
    ProductTable t;
    try {
      t = product_table(X, Y, po);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    out.emit(rep::product_report(t, po));
    if (!t.contradictions.empty()) {
      for (const auto& c : t.contradictions) std::cerr << "contradiction: " << c << "\n";
      return kUnknown;
    }
    return table_exit(t.table);
  }
  if (*ib) {
    Form Omega;
    try {
      Omega = parse_form_file(read_file(file));
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
    const int n = Omega.dim();
    if (n < 2 || !Omega.is_pure(n - 1, n - 1) || !is_real(Omega))
      throw InputError("expected a real (" + std::to_string(n - 1) + "," + std::to_string(n - 1) + ")-form");
    auto pv = classify_P(to_float(Omega));
    if (pv.status != Status::StrictlyIn)
      throw InputError(std::string("form is not strictly positive (P: ") + to_string(pv.status) + ")");
    FormF w = invert_balanced(to_float(Omega));
    double fact = 1;
    for (int r = 2; r < n; ++r) fact *= r;
    FormF target = to_float(Omega);
    const double residual = distance((1.0 / fact) * wedge_power(w, n - 1), target) / std::max(1e-300, max_abs(target));
    out.emit(rep::invert_balanced_report(Omega, w, residual));
    return kYes;
  }
  if (*vf) {
    rep::Json r;
    try {
      r = rep::Json::parse(read_file(file));
    } catch (const std::exception& e) {
      throw InputError(std::string("cannot read report: ") + e.what());
    }
    auto res = rep::verify_report(r);
    for (const auto& f : res.failures) std::cout << "FAIL " << f << "\n";
    std::cout << (res.ok ? "verified " : "rejected ") << res.checked << " cells\n";
    return res.ok ? kYes : kNo;
  }
  return kInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInput;
  }
}

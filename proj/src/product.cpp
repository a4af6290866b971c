#include "pkahler/product.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace pkahler {

ProductSpec product_spec(const ManifoldSpec& X, const ManifoldSpec& Y) {
  ProductSpec P;
  P.left = X;
  P.right = Y;
  P.m = X.n;
  P.n = Y.n;
  const int N = X.n + Y.n;
  if (N > kMaxDim) throw std::invalid_argument("product dimension exceeds " + std::to_string(kMaxDim));
  P.combined.name = X.name + " x " + Y.name;
  P.combined.n = N;
  for (const auto& f : X.d_phi) P.combined.d_phi.push_back(shift_frame(f, 0, N));
  for (const auto& f : Y.d_phi) P.combined.d_phi.push_back(shift_frame(f, X.n, N));
  return P;
}

Form pull_left(const ProductSpec& P, const Form& f) {
  if (f.dim() != P.m) throw std::invalid_argument("pull_left: form is not on the left factor");
  return shift_frame(f, 0, P.m + P.n);
}

Form pull_right(const ProductSpec& P, const Form& f) {
  if (f.dim() != P.n) throw std::invalid_argument("pull_right: form is not on the right factor");
  return shift_frame(f, P.m, P.m + P.n);
}

Form pushforward_projection(const ProductSpec& P, const Form& f, Factor onto) {
  const int N = P.m + P.n;
  if (f.dim() != N) throw std::invalid_argument("pushforward: form is not on the product");
  const bool left = onto == Factor::Left;
  const int fiber = left ? P.n : P.m;
  const Mask F = left ? (full_mask(P.n) << P.m) : full_mask(P.m);
  for (const auto& [k, c] : f.terms())
    if (degree(k.first) < fiber || degree(k.second) < fiber)
      throw std::invalid_argument("pushforward: bidegree (" + std::to_string(degree(k.first)) + "," +
                                  std::to_string(degree(k.second)) + ") is below the fiber dimension " +
                                  std::to_string(fiber));
  const GaussianRational inv = GaussianRational(1) / sigma(fiber);
  Form out(left ? P.m : P.n);
  for (const auto& [k, c] : f.terms()) {
    if ((k.first & F) != F || (k.second & F) != F) continue;
    Mask I = k.first & ~F, J = k.second & ~F;
    // left: phi_I phi_F bar_J bar_F -> (phi_I bar_J) ^ phi_F bar_F
    // right: phi_F phi_I bar_F bar_J -> phi_F bar_F ^ (phi_I bar_J)
    const int moved = left ? degree(J) : degree(I);
    GaussianRational v = c * inv;
    if ((fiber * moved) & 1) v = -v;
    if (!left) {
      I >>= P.m;
      J >>= P.m;
    }
    out.add(I, J, v);
  }
  return out;
}

namespace {

struct Rung {
  int s = 0;
  Form omega;
  std::vector<Form> aux;
  bool del_closed = false;
};

Form volume_pp(int n) { return standard_pp(n, n); }

// Rungs s = lo..dim on one factor, the top being the volume form.
std::map<int, Rung> rungs(const ManifoldSpec& spec, const std::vector<LadderForm>& ladder) {
  Calculus calc(spec);
  std::map<int, Rung> out;
  for (const auto& r : ladder) {
    if (r.omega.dim() != spec.n) throw std::invalid_argument("ladder form of " + spec.name + " has the wrong frame");
    out[r.s] = Rung{r.s, r.omega, r.aux, calc.del(r.omega).is_zero()};
  }
  out[spec.n] = Rung{spec.n, volume_pp(spec.n), {}, true};
  return out;
}

// The closed lift of a rung for S, or its potential for WK.
Form s_total(const Rung& r) { return r.aux.empty() ? r.omega : assemble_closed_form(r.omega, r.aux); }

std::vector<Form> s_aux_from_total(const Form& Psi, int j, int N) {
  std::vector<Form> aux;
  for (int a = j + 1; a <= std::min(2 * j, N); ++a) aux.push_back(Psi.component(a, 2 * j - a));
  return aux;
}

// sum over (left rung, right rung) pairs of their wedge, with the class's auxiliaries.
ThetaForm assemble(const ProductSpec& P, KClass cls, int j, const std::vector<std::pair<const Rung*, const Rung*>>& terms) {
  const int N = P.m + P.n;
  ThetaForm t;
  t.j = j;
  t.cls = cls;
  t.theta = Form(N);
  Form alpha(N), Psi(N);
  for (const auto& [L, R] : terms) {
    Form l = pull_left(P, L->omega), r = pull_right(P, R->omega);
    t.theta += wedge(l, r);
    t.summands.emplace_back(L->s, R->s);
    if (cls != KClass::WK && cls != KClass::S) continue;
    if (!L->del_closed && !R->del_closed)
      throw std::invalid_argument("ladder: neither Omega_" + std::to_string(L->s) + " nor Phi_" + std::to_string(R->s) +
                                  " is del-closed");
    // a real del-closed (s,s)-form is closed, so its potential can be taken zero
    if (cls == KClass::WK) {
      if (R->del_closed) {
        if (!L->aux.empty()) alpha += wedge(pull_left(P, L->aux[0]), r);
      } else if (!R->aux.empty()) {
        alpha += wedge(l, pull_right(P, R->aux[0]));
      }
    } else {
      Psi += R->del_closed ? wedge(pull_left(P, s_total(*L)), r) : wedge(l, pull_right(P, s_total(*R)));
    }
  }
  if (cls == KClass::WK) t.aux = {alpha};
  if (cls == KClass::S) t.aux = s_aux_from_total(Psi, j, N);
  return t;
}

bool in_P(const Form& f) {
  auto v = classify_P(to_float(f));
  return v.status == Status::In || v.status == Status::StrictlyIn;
}

}  // namespace

LadderReport check_ladder_hypotheses(const ProductSpec& P, const LadderInput& in) {
  const int m = P.m, n = P.n, p = in.p, q = in.q;
  LadderReport rep;
  auto bad = [&](std::string s) { rep.violations.push_back(std::move(s)); };
  if (p < 1 || p > m - 1) bad("left ladder start p = " + std::to_string(p) + " outside 1.." + std::to_string(m - 1));
  if (q < 1 || q > n - 1) bad("right ladder start q = " + std::to_string(q) + " outside 1.." + std::to_string(n - 1));
  if (!rep.violations.empty()) return rep;

  std::map<int, bool> closedL, closedR;
  auto side = [&](const ManifoldSpec& spec, const std::vector<LadderForm>& ladder, int lo, const char* name,
                  std::map<int, bool>& closed) {
    Calculus calc(spec);
    std::map<int, const LadderForm*> by_s;
    for (const auto& r : ladder) by_s[r.s] = &r;
    for (int s = lo; s < spec.n; ++s) {
      const std::string tag = std::string(name) + "_" + std::to_string(s);
      auto it = by_s.find(s);
      if (it == by_s.end()) {
        bad(tag + " missing");
        closed[s] = false;
        continue;
      }
      const auto& r = *it->second;
      if (!r.omega.is_pure(s, s) || !is_real(r.omega)) bad(tag + " is not a real (s,s)-form");
      else if (!verify_closure(spec, in.cls, r.omega, r.aux)) bad(tag + " fails the " + std::string(to_string(in.cls)) + " closure equations");
      else if (!in_P(r.omega)) bad(tag + " has a negative eigenvalue");
      closed[s] = calc.del(r.omega).is_zero();
    }
    closed[spec.n] = true;
  };
  side(P.left, in.left, p, "Omega", closedL);
  side(P.right, in.right, q, "Phi", closedR);

  const int L = m - p, R = n - q;
  rep.left_shorter = L <= R;
  rep.j_min = m + n - std::min(L, R);
  rep.j_max = m + n - 1;
  if (in.cls != KClass::K) {
    // along the shorter ladder, each non-del-closed rung needs del-closed partners at the top of the other
    const int len = std::min(L, R);
    const int a0 = rep.left_shorter ? p : q, top = rep.left_shorter ? n : m;
    auto& mine = rep.left_shorter ? closedL : closedR;
    auto& other = rep.left_shorter ? closedR : closedL;
    const char* me = rep.left_shorter ? "Omega" : "Phi";
    const char* them = rep.left_shorter ? "Phi" : "Omega";
    for (int a = 1; a < len; ++a) {
      if (mine[a0 + a]) continue;
      for (int r = top - a; r < top; ++r)
        if (!other[r])
          bad(std::string("a = ") + std::to_string(a) + ": del " + me + "_" + std::to_string(a0 + a) + " != 0 and del " +
              them + "_" + std::to_string(r) + " != 0");
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

ThetaForm theta_form(const ProductSpec& P, const LadderInput& in, int j) {
  const int m = P.m, n = P.n;
  const int lo = m + n - std::min(m - in.p, n - in.q);
  if (j < lo || j >= m + n)
    throw std::invalid_argument("j = " + std::to_string(j) + " outside the admissible range " + std::to_string(lo) +
                                " <= j <= " + std::to_string(m + n - 1) + " (m + n - min(m - p, n - q) = " +
                                std::to_string(lo) + ")");
  auto rep = check_ladder_hypotheses(P, in);
  if (!rep.ok) throw std::invalid_argument("ladder hypotheses fail: " + rep.violations.front());
  auto Ls = rungs(P.left, in.left), Rs = rungs(P.right, in.right);
  std::vector<std::pair<const Rung*, const Rung*>> terms;
  for (int s = std::max(j - n, in.p); s <= std::min(m, j - in.q); ++s) {
    auto a = Ls.find(s), b = Rs.find(j - s);
    if (a == Ls.end() || b == Rs.end())
      throw std::invalid_argument("ladder: missing rung for the summand (" + std::to_string(s) + "," +
                                  std::to_string(j - s) + ")");
    terms.emplace_back(&a->second, &b->second);
  }
  return assemble(P, in.cls, j, terms);
}

ThetaForm theta_kahler(const ProductSpec& P, const Form& omega, KClass cls, int q, const std::vector<LadderForm>& ladder,
                       int j, Factor kahler_side) {
  const bool left = kahler_side == Factor::Left;
  const ManifoldSpec& K = left ? P.left : P.right;
  const ManifoldSpec& Y = left ? P.right : P.left;
  const int a = K.n, b = Y.n;
  if (q < 1 || q > b - 1) throw std::invalid_argument("theta_kahler: ladder start q outside 1.." + std::to_string(b - 1));
  if (j < a + q || j >= a + b)
    throw std::invalid_argument("j = " + std::to_string(j) + " outside the admissible range " + std::to_string(a + q) +
                                " <= j <= " + std::to_string(a + b - 1) + " (dim + q = " + std::to_string(a + q) + ")");
  if (omega.dim() != a || !omega.is_pure(1, 1) || !differential(K, omega, Op::D).is_zero())
    throw std::invalid_argument("theta_kahler: omega is not a closed (1,1)-form on " + K.name);
  std::map<int, Rung> Ks;
  Form pw = Form::constant(a, GaussianRational(1));
  for (int k = 0; k <= a; ++k) {
    Ks[k] = Rung{k, pw, {}, true};
    pw = GaussianRational(Rational(1, k + 1)) * wedge(pw, omega);
  }
  auto Ys = rungs(Y, ladder);
  std::vector<std::pair<const Rung*, const Rung*>> terms;
  for (int k = std::max(0, j - b); k <= a; ++k) {
    auto it = Ys.find(j - k);
    if (it == Ys.end()) throw std::invalid_argument("theta_kahler: missing rung " + std::to_string(j - k));
    if (left)
      terms.emplace_back(&Ks[k], &it->second);
    else
      terms.emplace_back(&it->second, &Ks[k]);
  }
  return assemble(P, cls, j, terms);
}

ThetaCheck check_theta(const ProductSpec& P, const ThetaForm& t, const OptimizerOptions& opts, int samples) {
  ThetaCheck c;
  c.closure = verify_closure(P.combined, t.cls, t.theta, t.aux);
  FormF f = to_float(t.theta);
  auto v = classify_P(f);
  c.positive = v.status;
  c.eigen_min = v.min_value;
  auto tr = check_transverse(f, opts);
  c.transverse = tr.status;
  c.plane_min = tr.min_value;
  c.sample_min = samples > 0 ? sample_plane_min(f, samples, opts.seed) : 0;
  return c;
}

ImplicationReport factor_implications(const ClassificationTable& X, const ClassificationTable& Y,
                                      ClassificationTable& product) {
  ImplicationReport rep;
  const int m = X.n, n = Y.n;
  auto apply = [&](int p, KClass c, const ClassificationTable& F, int pf, const std::string& how) {
    if (F.at(pf, c) != Verdict::No) return;
    auto& cell = product.cells[{p, c}];
    const std::string why = how + ": " + F.spec_name + " is not " + std::to_string(pf) + to_string(c);
    if (cell.decision.verdict == Verdict::Yes) {
      rep.contradictions.push_back(std::to_string(p) + to_string(c) + " is Yes but " + why);
      return;
    }
    if (cell.decision.verdict == Verdict::No) return;
    cell.decision = Decision{};
    cell.decision.verdict = Verdict::No;
    cell.decision.method = why;
    cell.note = "factor";
    ++rep.filled;
  };
  for (int p = 1; p < m + n; ++p)
    for (KClass c : kAllClasses) {
      if (p < m) apply(p, c, X, p, "restriction to a fiber");
      if (p < n) apply(p, c, Y, p, "restriction to a fiber");
      if (p > n && p - n < m) apply(p, c, X, p - n, "pushforward along the compact factor " + Y.spec_name);
      if (p > m && p - m < n) apply(p, c, Y, p - m, "pushforward along the compact factor " + X.spec_name);
    }
  return rep;
}

std::optional<std::pair<int, std::vector<LadderForm>>> ladder_from_table(const ManifoldSpec& spec,
                                                                         const ClassificationTable& t, KClass cls,
                                                                         const DecideOptions& opts) {
  int p = spec.n;
  while (p - 1 >= 1 && t.at(p - 1, cls) == Verdict::Yes) --p;
  if (p == spec.n) return std::nullopt;
  std::vector<LadderForm> out;
  for (int s = p; s < spec.n; ++s) {
    const auto& d = t.cells.at({s, cls}).decision;
    Decision fresh;
    const Decision* src = &d;
    if (!d.omega) {
      fresh = decide(spec, s, cls, opts);
      if (fresh.verdict != Verdict::Yes || !fresh.omega) {
        // the Gauduchon cell carries no invariant form when none was found
        if (s == p) {
          ++p;
          continue;
        }
        return std::nullopt;
      }
      src = &fresh;
    }
    out.push_back(LadderForm{s, *src->omega, src->aux});
  }
  if (out.empty()) return std::nullopt;
  return std::make_pair(p, out);
}

ProductTable product_table(const ManifoldSpec& X, const ManifoldSpec& Y, const ProductOptions& opts) {
  ProductTable out;
  out.spec = product_spec(X, Y);
  const ProductSpec& P = out.spec;
  const int m = P.m, n = P.n, N = m + n;
  if (m > 1) out.left = classification_table(X, opts.decide);
  else out.left = ClassificationTable{X.name, m, {}};
  if (n > 1) out.right = classification_table(Y, opts.decide);
  else out.right = ClassificationTable{Y.name, n, {}};
  auto& T = out.table;
  T.spec_name = P.combined.name;
  T.n = N;
  for (int p = 1; p < N; ++p)
    for (KClass c : kAllClasses) T.cells[{p, c}] = Cell{};

  auto place = [&](const ThetaForm& th, const std::string& method) {
    auto& cell = T.cells[{th.j, th.cls}];
    auto chk = check_theta(P, th, opts.positivity, 0);
    if (!chk.closure || chk.transverse != Status::StrictlyIn) return;
    if (cell.decision.verdict == Verdict::No) {
      out.contradictions.push_back(std::to_string(th.j) + to_string(th.cls) + ": " + method + " against " +
                                   cell.decision.method);
      return;
    }
    if (cell.decision.verdict == Verdict::Yes && cell.decision.omega) return;
    cell.decision = Decision{};
    cell.decision.verdict = Verdict::Yes;
    cell.decision.method = method;
    cell.decision.omega = th.theta;
    cell.decision.aux = th.aux;
    cell.decision.plane_min = chk.plane_min;
    cell.implied_from.reset();
    out.thetas.push_back(th);
  };

  auto imp = factor_implications(out.left, out.right, T);
  out.contradictions.insert(out.contradictions.end(), imp.contradictions.begin(), imp.contradictions.end());

  // rung s = 1 of each factor for the sum of pullbacks; a curve is Kaehler for every class
  auto one = [&](const ManifoldSpec& S, const ClassificationTable& t, KClass c) -> std::optional<LadderForm> {
    if (S.n == 1) return LadderForm{1, volume_pp(1), {}};
    if (t.at(1, c) != Verdict::Yes) return std::nullopt;
    const auto& d = t.cells.at({1, c}).decision;
    if (d.omega) return LadderForm{1, *d.omega, d.aux};
    auto f = decide(S, 1, c, opts.decide);
    if (f.verdict != Verdict::Yes || !f.omega) return std::nullopt;
    return LadderForm{1, *f.omega, f.aux};
  };
  for (KClass c : kAllClasses) {
    auto a = one(X, out.left, c), b = one(Y, out.right, c);
    if (!a || !b) continue;
    Rung ra{1, a->omega, a->aux, false}, rb{1, b->omega, b->aux, false};
    ThetaForm th;
    th.j = 1;
    th.cls = c;
    th.theta = pull_left(P, a->omega) + pull_right(P, b->omega);
    th.summands = {{1, 0}, {0, 1}};
    if (c == KClass::WK) {
      Form al(N);
      if (!a->aux.empty()) al += pull_left(P, a->aux[0]);
      if (!b->aux.empty()) al += pull_right(P, b->aux[0]);
      th.aux = {al};
    } else if (c == KClass::S) {
      th.aux = s_aux_from_total(pull_left(P, s_total(ra)) + pull_right(P, s_total(rb)), 1, N);
    }
    place(th, "sum of the pulled back (1,1)-forms");
  }

  for (KClass c : kAllClasses) {
    auto lx = m > 1 ? ladder_from_table(X, out.left, c, opts.decide) : std::nullopt;
    auto ly = n > 1 ? ladder_from_table(Y, out.right, c, opts.decide) : std::nullopt;
    if (lx && ly) {
      LadderInput in{c, lx->first, ly->first, lx->second, ly->second};
      auto rep = check_ladder_hypotheses(P, in);
      if (rep.ok)
        for (int j = rep.j_min; j <= rep.j_max; ++j)
          place(theta_form(P, in, j), "ladder product form (left from " + std::to_string(in.p) + ", right from " +
                                          std::to_string(in.q) + ")");
    }
    auto kahler = [&](const ManifoldSpec& S, const ClassificationTable& t) -> std::optional<Form> {
      if (S.n == 1) return volume_pp(1);
      if (t.at(1, KClass::K) != Verdict::Yes) return std::nullopt;
      const auto& d = t.cells.at({1, KClass::K}).decision;
      if (d.omega) return *d.omega;
      auto f = decide(S, 1, KClass::K, opts.decide);
      return f.omega;
    };
    if (auto w = kahler(X, out.left); w && ly)
      for (int j = m + ly->first; j < N; ++j)
        place(theta_kahler(P, *w, c, ly->first, ly->second, j, Factor::Left),
              "Kaehler factor " + X.name + " with ladder from " + std::to_string(ly->first));
    if (auto w = kahler(Y, out.right); w && lx)
      for (int j = n + lx->first; j < N; ++j)
        place(theta_kahler(P, *w, c, lx->first, lx->second, j, Factor::Right),
              "Kaehler factor " + Y.name + " with ladder from " + std::to_string(lx->first));
  }

  for (int p = 1; p < N; ++p) {
    bool open = false;
    for (KClass c : kAllClasses) open |= T.at(p, c) == Verdict::Unknown;
    if (!open) continue;
    const int k = N - p;
    SimpleExactOptions so;
    so.seed = opts.decide.seed;
    auto r = find_simple_exact_holomorphic(P.combined, k, so);
    if (r.status != SearchStatus::Found) continue;
    CurrentCertificate cert;
    cert.kind = CertKind::SimpleExactHolomorphic;
    cert.p = p;
    cert.alpha = r.alpha;
    cert.beta = r.beta;
    cert.T = sigma(k) * wedge(*r.alpha, conjugate(*r.alpha));
    cert.sp_factors = {*r.alpha};
    if (!verify_certificate(P.combined, cert).ok) continue;
    auto& cell = T.cells[{p, KClass::PL}];
    if (cell.decision.verdict == Verdict::Yes) {
      out.contradictions.push_back(std::to_string(p) + "PL: simple exact holomorphic form against " +
                                   cell.decision.method);
      continue;
    }
    cell.decision = Decision{};
    cell.decision.verdict = Verdict::No;
    cell.decision.method = "simple exact holomorphic form (" + r.method + ")";
    cell.decision.cert = std::move(cert);
  }

  auto& top = T.cells[{N - 1, KClass::PL}];
  if (top.decision.verdict == Verdict::Unknown) {
    top.decision.verdict = Verdict::Yes;
    top.decision.method = "every compact manifold carries a Gauduchon metric";
  }

  for (int guard = 0; guard < 8; ++guard) {
    if (!propagate_implications(T)) out.contradictions.push_back("implication propagation collided");
    auto r = factor_implications(out.left, out.right, T);
    out.contradictions.insert(out.contradictions.end(), r.contradictions.begin(), r.contradictions.end());
    if (r.filled == 0) break;
  }

  if (opts.decide_remaining) {
    for (int p = N - 1; p >= 1; --p)
      for (KClass c : {KClass::PL, KClass::S, KClass::K, KClass::WK}) {
        auto& cell = T.cells[{p, c}];
        if (cell.decision.verdict != Verdict::Unknown) continue;
        cell.decision = decide(P.combined, p, c, opts.decide);
        if (!propagate_implications(T)) out.contradictions.push_back("implication propagation collided");
      }
  }
  if (!table_consistent(T)) out.contradictions.push_back("table inconsistent across classes");
  return out;
}

}  // namespace pkahler

// One PASS/FAIL line per acceptance criterion. Optional argv[1]: path of the pkahler CLI,
// used by the determinism criterion in addition to the library path.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "pkahler/catalog.hpp"
#include "pkahler/report.hpp"
#include "pkahler/spec_io.hpp"

using namespace pkahler;
using Eigen::MatrixXcd;

#ifndef PKAHLER_FIXTURES
#define PKAHLER_FIXTURES "tests/fixtures"
#endif

namespace {

struct Result {
  bool ok = true;
  int failures = 0;
  std::string first;

  void check(bool c, const std::string& what) {
    if (c) return;
    if (ok) first = what;
    ok = false;
    ++failures;
  }
};

Form mono(int n, std::initializer_list<int> I, std::initializer_list<int> J = {}) {
  return Form::monomial(n, from_indices(I), from_indices(J));
}

const GaussianRational I_(0, 1);

GaussianRational q(long a, long b = 1) { return GaussianRational(Rational(a, b)); }

Form kahler(int n) {
  Form w(n);
  for (int i = 1; i <= n; ++i) w += sigma(1) * mono(n, {i}, {i});
  return w;
}

double factorial(int k) {
  double f = 1;
  for (int r = 2; r <= k; ++r) f *= r;
  return f;
}

OptimizerOptions opt(int restarts, std::uint64_t seed) {
  OptimizerOptions o;
  o.restarts = restarts;
  o.seed = seed;
  return o;
}

Form fixture(const std::string& name) { return parse_form_file(read_file(std::string(PKAHLER_FIXTURES) + "/" + name)); }

// ---------------------------------------------------------------------------

Result sigma_and_volume() {
  Result r;
  r.check(sigma(1) == GaussianRational(0, Rational(1, 2)), "sigma(1) != i/2");
  for (int n = 1; n <= 4; ++n) {
    // dv = prod_j (i/2 phi_j ^ bar_j)
    Form prod = Form::constant(n, q(1));
    for (int j = 1; j <= n; ++j) prod = wedge(prod, sigma(1) * mono(n, {j}, {j}));
    r.check(prod == volume_form<GaussianRational>(n), "dv != product of i/2 phi_j bar_j, n = " + std::to_string(n));
    for (int p = 0; p <= n; ++p)
      for (Mask A : subsets(n, p)) {
        Mask B = complement(A, n);
        Form a = Form::monomial(n, A, A, sigma(p)), b = Form::monomial(n, B, B, sigma(n - p));
        r.check(volume_pairing(a, b) == q(1), "complementary pairing != 1");
        r.check(wedge(a, b) == volume_form<GaussianRational>(n), "sigma_p phi_I bar_I ^ complement != dv");
      }
  }
  return r;
}

FormF random_positive_11(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  MatrixXcd A(n, n);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<MatrixXcd> qr(A);
  MatrixXcd U = qr.householderQ();
  std::uniform_real_distribution<double> u(0.5, 3.0);
  FormF w(n);
  for (int j = 0; j < n; ++j) {
    double l = u(rng) + j;
    FormF psi(n);
    for (int i = 0; i < n; ++i) psi.add(bit(i + 1), 0, U(j, i));
    w += (l * sigma_f(1)) * wedge(psi, conjugate(psi));
  }
  return w;
}

Result balanced_round_trip() {
  Result r;
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 4;
    FormF w = random_positive_11(rng, n);
    FormF p1 = wedge_power(w, n - 1);
    FormF back = invert_balanced((1.0 / factorial(n - 1)) * p1);
    FormF p2 = wedge_power(back, n - 1);
    r.check(distance(p2, p1) <= 1e-8 * max_abs(p1), "round trip residual above 1e-8, trial " + std::to_string(t));
  }
  // fixture: omega = sigma_1 (phi1 bar1 + 2 phi2 bar2 + 3 phi3 bar3), Lambda = (6, 3, 2)
  Form Omega = fixture("balanced_123.form");
  auto ed = eigen_decompose(to_float(Omega));
  const double Lam[3] = {2, 3, 6};
  for (int j = 0; j < 3; ++j) r.check(std::abs(ed.values[j] - Lam[j]) < 1e-10, "fixture eigenvalues differ from (6,3,2)");
  FormF w = invert_balanced(to_float(Omega));
  // lambda_j = (Lambda_1 Lambda_2 Lambda_3)^{1/2} / Lambda_j = 6 / Lambda_j
  for (int j = 1; j <= 3; ++j) {
    const double lambda = 6.0 / (j == 1 ? 6 : j == 2 ? 3 : 2);
    r.check(std::abs(w.coefficient(bit(j), bit(j)) - lambda * sigma_f(1)) < 1e-10, "lambda formula off on the fixture");
  }
  for (const char* f : {"balanced_ones.form", "balanced_random_diagonal.form"}) {
    Form O = fixture(f);
    const int n = O.dim();
    FormF b = invert_balanced(to_float(O));
    r.check(distance((1.0 / factorial(n - 1)) * wedge_power(b, n - 1), to_float(O)) <= 1e-8 * max_abs(to_float(O)),
            std::string("round trip on ") + f);
  }
  r.check(distance(invert_balanced(to_float(fixture("balanced_ones.form"))), to_float(kahler(4))) < 1e-10,
          "all-ones fixture does not give the standard form");
  return r;
}

Result nonsimple_square() {
  Result r;
  Form e = mono(4, {1, 2}) + mono(4, {3, 4});
  r.check(!is_simple(e), "phi12 + phi34 reported simple");
  r.check(!plucker_relations_hold(e), "Pluecker relations hold for phi12 + phi34");
  auto ed = eigen_decompose(to_float(sigma(2) * wedge(e, conjugate(e))));
  const std::vector<double> expect = {0, 0, 0, 0, 0, 2};
  for (int j = 0; j < 6; ++j) r.check(std::abs(ed.values[j] - expect[j]) < 1e-10, "spectrum of the square != {2,0,...}");
  FormF f = to_float(fixture("wp_interior_negative_eigen.form"));
  r.check(eigen_decompose(f).values.front() < -1e-6, "fixture has no eigenvalue below -1e-6");
  r.check(min_over_grassmannian(f, opt(256, 3)).value > 1e-6, "fixture Grassmannian minimum not above 1e-6");
  return r;
}

FormF random_real_float(std::mt19937_64& rng, int n, int p) {
  const auto& ks = subsets(n, p);
  MatrixXcd A(ks.size(), ks.size());
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = Complex(g(rng), g(rng));
  return form_from_rep(HermitianRep{n, p, A + A.adjoint()});
}

Result cone_collapse() {
  Result r;
  std::mt19937_64 rng(44);
  int seen[4] = {0, 0, 0, 0};
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 4;
    const int p = (t / 4) % 2 ? 1 : n - 1;
    FormF omega(n);
    switch (t % 3) {
      case 0:  // indefinite or negative
        omega = random_real_float(rng, n, p);
        break;
      case 1:  // strictly positive
        omega = random_real_float(rng, n, p) + Complex(20.0) * to_float(standard_pp(n, p));
        break;
      default: {  // boundary: fewer squares than the rank, exact coefficients
        Form s(n);
        const int N = static_cast<int>(subsets(n, p).size());
        for (int k = 0; k < std::max(1, N - 1); ++k) {
          Form eta(n);
          for (int i = 1; i <= n; ++i)
            if (p == 1) eta += oracle::small_scalar(rng) * Form::phi(n, i);
          if (p != 1) {
            Form a = Form::constant(n, q(1));
            for (int c = 0; c < p; ++c) {
              Form l(n);
              for (int i = 1; i <= n; ++i) l += oracle::small_scalar(rng) * Form::phi(n, i);
              a = wedge(a, l);
            }
            eta = a;
          }
          s += sigma(p) * wedge(eta, conjugate(eta));
        }
        omega = to_float(s);
      }
    }
    auto a = classify_P(omega).status;
    auto b = check_transverse(omega, opt(8, t)).status;
    ++seen[static_cast<int>(a)];
    r.check(a == b, "P and transverse verdicts differ at n = " + std::to_string(n) + ", p = " + std::to_string(p) +
                        ": " + to_string(a) + " vs " + to_string(b));
  }
  r.check(seen[0] && seen[1] && seen[2], "the sample did not cover StrictlyIn, In and NotIn");
  return r;
}

Result catalog_differentials() {
  Result r;
  auto i3 = catalog::iwasawa();
  r.check(Calculus(i3).del(Form::phi(3, 3)) == mono(3, {1, 2}), "I3: del phi3 != phi12");
  for (int k = 1; k <= 4; ++k) {
    auto eb = catalog::eta_beta(k);
    const int n = 2 * k + 1;
    Form rhs(n);
    for (int i = 1; i <= k; ++i) rhs += mono(n, {2 * i - 1, 2 * i});
    r.check(Calculus(eb).d(Form::phi(n, n)) == rhs, "eta_beta: d phi_{2n+1} mismatch, n = " + std::to_string(k));
    for (int j = 1; j < n; ++j) r.check(Calculus(eb).d(Form::phi(n, j)).is_zero(), "eta_beta: d phi_j != 0 for j <= 2n");
  }
  auto i31 = catalog::i3_1();
  Form w = kahler(3);
  r.check((I_ * Calculus(i31).ddbar(w)).is_zero(), "I31: i del delbar omega != 0");
  r.check(Calculus(i31).del(wedge(w, w)) == GaussianRational(0, Rational(-3, 4)) * mono(3, {1, 2, 3}, {1, 2}),
          "I31: del omega^2 != -3i/4 phi123 bar12");
  auto e8 = catalog::efv8();
  r.check((I_ * Calculus(e8).ddbar(kahler(4))).is_zero(), "efv8: i del delbar omega != 0");
  return r;
}

Result parallelizable_phk() {
  Result r;
  std::vector<ManifoldSpec> specs;
  for (int n = 1; n <= 4; ++n) specs.push_back(catalog::torus(n));
  specs.push_back(catalog::iwasawa());
  specs.push_back(catalog::eta_beta(2));
  specs.push_back(catalog::eta_beta(3));
  specs.push_back(product_spec(catalog::iwasawa(), catalog::iwasawa()).combined);
  for (const auto& s : specs) {
    if (s.n < 2) continue;  // p = n - 1 = 0 has nothing to construct
    r.check(is_parallelizable(s), s.name + " not parallelizable");
    auto ph = phk_construct(s, s.n - 1);
    r.check(Calculus(s).d(ph.omega).is_zero(), s.name + ": d Omega != 0");
    r.check(ph.decomposition_simple && verify_sp_decomposition(ph.omega, ph.factors).ok,
            s.name + ": SP decomposition not verified");
    r.check(check_transverse(to_float(ph.omega), opt(64, 6)).status == Status::StrictlyIn, s.name + ": not transverse");
  }
  auto eb = catalog::eta_beta(2);
  auto w3 = find_simple_exact_holomorphic(eb, 3);
  r.check(w3.status == SearchStatus::Found && w3.alpha && verify_simple_exact(eb, *w3.alpha, *w3.beta),
          "eta_beta 2: no verified simple exact holomorphic 3-form");
  if (w3.alpha) {
    // the witness spans the line of -phi134
    Form a = *w3.alpha;
    r.check(a.terms().size() == 1 && a.terms().begin()->first == std::make_pair(from_indices({1, 3, 4}), Mask(0)),
            "eta_beta 2: witness is not a multiple of phi134");
  }
  r.check(verify_simple_exact(eb, -mono(5, {1, 3, 4}), mono(5, {1, 5})), "-phi134 = del phi15 not verified");
  for (int p : {3, 4}) {
    auto none = find_simple_exact_holomorphic(eb, 5 - p);
    auto ph = phk_construct(eb, p);
    bool transverse = Calculus(eb).d(ph.omega).is_zero() &&
                      check_transverse(to_float(ph.omega), opt(64, 7)).status == Status::StrictlyIn;
    r.check(none.status == SearchStatus::CertifiedNone || transverse, "eta_beta 2: p = " + std::to_string(p));
  }
  auto t = classification_table(eb);
  for (int p = 1; p < 5; ++p)
    for (KClass c : kAllClasses)
      r.check(t.at(p, c) == (p >= 3 ? Verdict::Yes : Verdict::No),
              "eta_beta 2 table cell " + std::to_string(p) + to_string(c));
  return r;
}

void check_cell(Result& r, const ClassificationTable& t, int p, KClass c, Verdict v) {
  r.check(t.at(p, c) == v, t.spec_name + " " + std::to_string(p) + to_string(c) + " is " + to_string(t.at(p, c)));
}

CurrentCertificate cert(CertKind kind, int p, const Form& T, std::vector<Form> f, std::vector<Rational> w,
                        const Form& potential) {
  CurrentCertificate c;
  c.kind = kind;
  c.p = p;
  c.T = T;
  c.sp_factors = std::move(f);
  c.sp_weights = std::move(w);
  c.potential = potential;
  return c;
}

Result efv8_table() {
  Result r;
  auto s = catalog::efv8();
  auto t = classification_table(s);
  const auto Y = Verdict::Yes, N = Verdict::No;
  check_cell(r, t, 1, KClass::PL, Y);
  check_cell(r, t, 2, KClass::PL, N);
  for (KClass c : {KClass::K, KClass::S, KClass::WK}) check_cell(r, t, 1, c, N);
  for (KClass c : {KClass::S, KClass::WK, KClass::K}) {
    check_cell(r, t, 2, c, N);
    r.check(t.cells.at({2, c}).implied_from.has_value(), std::string("2") + to_string(c) + " not by implication");
  }
  check_cell(r, t, 3, KClass::PL, Y);
  check_cell(r, t, 3, KClass::S, N);
  // the worked certificates, exactly
  Form T1 = mono(4, {1, 2}, {1, 2});
  auto c1 = cert(CertKind::DdbarExact, 2, T1, {mono(4, {1, 2})}, {Rational(4)}, -I_ * mono(4, {3}, {3}));
  auto v1 = verify_certificate(s, c1);
  r.check(v1.ok, "2PL certificate: " + v1.failure);
  const auto& d2 = t.cells.at({2, KClass::PL}).decision;
  r.check(d2.cert && d2.cert->T == T1 && d2.cert->potential && *d2.cert->potential == -I_ * mono(4, {3}, {3}),
          "2PL: table certificate differs from A = -i phi3 bar3, T = phi12 bar12");
  if (d2.cert) r.check(verify_certificate(s, *d2.cert).ok, "2PL: table certificate fails");
  Form R = I_ * (mono(4, {3}) - mono(4, {4})) - I_ * (mono(4, {}, {3}) - mono(4, {}, {4}));
  Form T2 = GaussianRational(0, 2) * (mono(4, {1}, {1}) + mono(4, {2}, {2}));
  r.check(Calculus(s).d(R) == T2, "3S: dR != 2i(phi1 bar1 + phi2 bar2)");
  auto v2 = verify_certificate(s, cert(CertKind::Boundary, 3, T2, {mono(4, {1}), mono(4, {2})}, {4, 4}, R));
  r.check(v2.ok, "3S certificate: " + v2.failure);
  const auto& d3 = t.cells.at({3, KClass::S}).decision;
  r.check(d3.cert && d3.cert->kind == CertKind::Boundary && verify_certificate(s, *d3.cert).ok,
          "3S: table certificate missing or failing");
  return r;
}

Result i31_suite() {
  Result r;
  auto s = catalog::i3_1();
  Calculus c(s);
  Form R = mono(3, {1, 2}, {3});
  R += conjugate(R);
  Form T1 = q(2) * mono(3, {1, 2}, {1, 2});
  r.check(c.d(R) == T1, "dR != 2 phi12 bar12");
  auto v1 = verify_certificate(s, cert(CertKind::Boundary, 1, T1, {mono(3, {1, 2})}, {Rational(8)}, R));
  r.check(v1.ok, "not-1S certificate: " + v1.failure);
  Form S = Form::phi(3, 3);
  Form T2 = I_ * (mono(3, {1}, {1}) + q(2) * mono(3, {2}, {2}));
  r.check(c.del(conjugate(S)) + c.delbar(S) == T2, "del bar3 + delbar phi3 != i(phi1 bar1 + 2 phi2 bar2)");
  r.check(c.ddbar(S).is_zero(), "del delbar phi3 != 0");
  auto v2 = verify_certificate(
      s, cert(CertKind::ClosedBoundaryComponent, 2, T2, {mono(3, {1}), mono(3, {2})}, {Rational(2), Rational(4)}, S));
  r.check(v2.ok, "not-2WK certificate: " + v2.failure);

  auto d1 = decide(s, 1, KClass::S);
  r.check(d1.verdict == Verdict::No && d1.cert && verify_certificate(s, *d1.cert).ok, "decide: 1S not a verified No");
  auto d2 = decide(s, 2, KClass::WK);
  r.check(d2.verdict == Verdict::No && d2.cert && verify_certificate(s, *d2.cert).ok, "decide: 2WK not a verified No");
  auto y = decide(s, 2, KClass::S);
  r.check(y.verdict == Verdict::Yes && y.omega, "decide: 2S not Yes");
  if (y.omega) {
    r.check(y.aux.size() == 1 && y.aux[0].is_pure(3, 1), "2S: auxiliary is not a single (3,1) component");
    Form Psi = assemble_closed_form(*y.omega, y.aux);
    r.check(c.d(Psi).is_zero(), "2S: assembled 4-form not closed");
    r.check(verify_closure(s, KClass::S, *y.omega, y.aux), "2S: closure equations fail");
    r.check(!c.d(*y.omega).is_zero(), "2S: Omega is closed on its own, the (3,1) component is not exercised");
  }
  return r;
}

Result product_table_9() {
  Result r;
  auto T = product_table(catalog::i3_1(), catalog::eta_beta(2));
  const auto& t = T.table;
  const auto Y = Verdict::Yes, N = Verdict::No;
  check_cell(r, t, 7, KClass::PL, Y);
  check_cell(r, t, 6, KClass::PL, Y);
  check_cell(r, t, 7, KClass::S, Y);
  for (int p : {1, 2, 3, 4, 5})
    for (KClass c : kAllClasses) check_cell(r, t, p, c, N);
  for (KClass c : {KClass::K, KClass::WK, KClass::S}) {
    check_cell(r, t, 6, c, N);
    r.check(t.cells.at({6, c}).note == "factor", std::string("6") + to_string(c) + " not from a factor");
  }
  for (KClass c : {KClass::K, KClass::WK}) {
    check_cell(r, t, 7, c, N);
    r.check(t.cells.at({7, c}).note == "factor", std::string("7") + to_string(c) + " not from a factor");
  }
  r.check(T.contradictions.empty(), "contradictions in the product table");
  const auto& c6 = t.cells.at({6, KClass::PL}).decision;
  if (c6.omega) {
    r.check(Calculus(T.spec.combined).ddbar(*c6.omega).is_zero(), "del delbar Theta_6 != 0");
    r.check(min_over_grassmannian(to_float(*c6.omega), opt(256, 42)).value > 1e-6, "Theta_6 plane minimum <= 1e-6");
  } else {
    r.check(false, "6PL has no Theta_6");
  }
  const auto& c7 = t.cells.at({7, KClass::S}).decision;
  r.check(c7.omega && verify_closure(T.spec.combined, KClass::S, *c7.omega, c7.aux), "7S form fails closure");
  // 7S again from the top rungs alone, p = m - 1 and q = n - 1
  auto lx = ladder_from_table(T.spec.left, T.left, KClass::S);
  auto ly = ladder_from_table(T.spec.right, T.right, KClass::S);
  if (lx && ly) {
    LadderInput top{KClass::S, 2, 4, {lx->second.back()}, {ly->second.back()}};
    auto hyp = check_ladder_hypotheses(T.spec, top);
    r.check(hyp.ok && hyp.j_min == 7 && hyp.j_max == 7, "top-rung ladders do not admit exactly j = 7");
    auto th = theta_form(T.spec, top, 7);
    auto chk = check_theta(T.spec, th, opt(256, 7), 1000);
    r.check(chk.closure && verify_closure(T.spec.combined, KClass::S, th.theta, th.aux), "top-rung Theta_7 closure");
    r.check(chk.transverse == Status::StrictlyIn && chk.sample_min > 0, "top-rung Theta_7 not transverse");
  } else {
    r.check(false, "no S ladders on the factors");
  }
  const int n = 8;
  Form alpha = mono(n, {1, 2, 4, 6, 7}), beta = -mono(n, {1, 2, 4, 8});
  r.check(differential(T.spec.combined, mono(n, {1, 2, 4, 8}), Op::Del) == -alpha, "phi12 phi'134 != del(phi12 phi'15)");
  r.check(verify_simple_exact(T.spec.combined, alpha, beta), "p = 3 witness not verified");
  const auto& c3 = t.cells.at({3, KClass::PL}).decision;
  r.check(c3.cert && verify_certificate(T.spec.combined, *c3.cert).ok, "3PL certificate missing or failing");
  // the report is self-verifying
  auto v = report::verify_report(report::product_report(T, ProductOptions{}));
  r.check(v.ok, "product report does not verify: " + (v.failures.empty() ? "" : v.failures.front()));
  return r;
}

Result product_properties() {
  Result r;
  auto eb = catalog::eta_beta(2);
  auto teb = classification_table(eb);
  int built = 0;
  for (const auto& X : {catalog::torus(2), catalog::torus(3), catalog::iwasawa()}) {
    auto P = product_spec(X, eb);
    auto tx = classification_table(X);
    for (KClass c : kAllClasses) {
      auto lx = ladder_from_table(X, tx, c);
      auto ly = ladder_from_table(eb, teb, c);
      r.check(lx && ly, P.combined.name + ": no " + to_string(c) + " ladders");
      if (!lx || !ly) continue;
      LadderInput in{c, lx->first, ly->first, lx->second, ly->second};
      auto hyp = check_ladder_hypotheses(P, in);
      r.check(hyp.ok, P.combined.name + " " + to_string(c) + ": hypotheses fail" +
                          (hyp.violations.empty() ? "" : ": " + hyp.violations.front()));
      if (!hyp.ok) continue;
      for (int j = hyp.j_min; j <= hyp.j_max; ++j) {
        auto th = theta_form(P, in, j);
        auto chk = check_theta(P, th, opt(64, 10 + j), 1000);
        const std::string tag = P.combined.name + " Theta_" + std::to_string(j) + " " + to_string(c);
        r.check(chk.closure && verify_closure(P.combined, c, th.theta, th.aux), tag + ": closure");
        r.check(chk.positive == Status::In || chk.positive == Status::StrictlyIn, tag + ": not in P");
        r.check(chk.sample_min > 0, tag + ": a sampled plane is not positive");
        r.check(chk.transverse == Status::StrictlyIn, tag + ": multistart finds no strict positivity");
        ++built;
      }
    }
  }
  r.check(built > 0, "no product forms built");
  return r;
}

Result operator_laws() {
  Result r;
  std::vector<ManifoldSpec> specs = {catalog::torus(3), catalog::torus(4), catalog::iwasawa(), catalog::eta_beta(2),
                                     catalog::eta_beta(3), catalog::eta_beta(4), catalog::i3_t(q(1, 3)),
                                     catalog::i3_1(), catalog::efv8()};
  std::mt19937_64 rng(11);
  for (const auto& s : specs) {
    Calculus c(s);
    std::uniform_int_distribution<int> d(0, s.n);
    for (int t = 0; t < 500; ++t) {
      Form f(s.n);
      for (int k = 0; k < 3; ++k) f += oracle::random_form(rng, s.n, d(rng), d(rng), 2);
      r.check(c.d(c.d(f)).is_zero(), s.name + ": d^2 != 0");
      r.check(c.del(c.del(f)).is_zero(), s.name + ": del^2 != 0");
      r.check(c.delbar(c.delbar(f)).is_zero(), s.name + ": delbar^2 != 0");
      r.check(c.del(c.delbar(f)) == -c.delbar(c.del(f)), s.name + ": del delbar != -delbar del");
    }
  }
  return r;
}

Result determinism(const std::string& cli) {
  Result r;
  auto s = catalog::efv8();
  DecideOptions o;
  o.seed = 42;
  o.optimizer.seed = 42;
  auto a = report::dump(report::classify_report(s, classification_table(s, o), o));
  auto b = report::dump(report::classify_report(s, classification_table(s, o), o));
  r.check(a == b, "library reports differ");
  r.check(report::verify_report(report::Json::parse(a)).ok, "classify report does not verify");
  if (!cli.empty()) {
    auto dir = std::filesystem::temp_directory_path() / ("pkahler_accept_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    std::string out[2];
    for (int k = 0; k < 2; ++k) {
      auto path = (dir / ("efv8_" + std::to_string(k) + ".json")).string();
      const std::string cmd = "\"" + cli + "\" classify efv8 --seed 42 -o \"" + path + "\" > /dev/null";
      r.check(std::system(cmd.c_str()) == 0, "CLI classify failed");
      out[k] = read_file(path);
    }
    r.check(!out[0].empty() && out[0] == out[1], "CLI reports differ");
    r.check(out[0] == a, "CLI report differs from the library report");
    std::filesystem::remove_all(dir);
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"sigma and volume conventions", sigma_and_volume},
      {"balanced inversion round trip", balanced_round_trip},
      {"non-simple square and WP-interior fixture", nonsimple_square},
      {"cone collapse at p = 1 and p = n - 1", cone_collapse},
      {"catalog differentials", catalog_differentials},
      {"parallelizable pHK forms and eta_beta 5", parallelizable_phk},
      {"efv8 table and certificates", efv8_table},
      {"I31 certificates and 2S", i31_suite},
      {"I31 x eta_beta 5 product table", product_table_9},
      {"ladder product forms across admissible j", product_properties},
      {"differential operator laws", operator_laws},
      {"deterministic classify report", [&] { return determinism(cli); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Result r;
    try {
      r = criteria[k].second();
    } catch (const std::exception& e) {
      r.check(false, std::string("exception: ") + e.what());
    }
    std::cout << (r.ok ? "PASS " : "FAIL ") << k + 1 << " " << criteria[k].first;
    if (!r.ok) std::cout << " (" << r.failures << " failures; first: " << r.first << ")";
    std::cout << std::endl;
    failed += !r.ok;
  }
  return failed ? 1 : 0;
}

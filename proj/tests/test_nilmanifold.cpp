#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "pkahler/catalog.hpp"
#include "pkahler/groebner.hpp"
#include "pkahler/nilmanifold.hpp"
#include "pkahler/positivity.hpp"

using namespace pkahler;

namespace {

Form mono(int n, std::initializer_list<int> I, std::initializer_list<int> J = {}) {
  return Form::monomial(n, from_indices(I), from_indices(J));
}

// Oracle: d(g_1 ... g_r) = sum_s (-1)^(s-1) g_1 ... d(g_s) ... g_r, assembled with the
// word wedge; no reordering shortcuts.
Form leibniz_oracle(const ManifoldSpec& spec, const Form& f) {
  const int n = spec.n;
  Form out(n);
  for (const auto& [k, c] : f.terms()) {
    std::vector<Form> gens, dgens;
    for (int i : indices(k.first)) {
      gens.push_back(Form::phi(n, i));
      dgens.push_back(spec.d_phi[i - 1]);
    }
    for (int j : indices(k.second)) {
      gens.push_back(Form::phibar(n, j));
      dgens.push_back(oracle::conjugate(spec.d_phi[j - 1]));
    }
    for (std::size_t s = 0; s < gens.size(); ++s) {
      Form term = Form::constant(n, c);
      for (std::size_t r = 0; r < gens.size(); ++r) term = oracle::wedge(term, r == s ? dgens[r] : gens[r]);
      out += (s % 2) ? -term : term;
    }
  }
  return out;
}

Form random_invariant(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> d(0, n);
  Form f(n);
  for (int t = 0; t < 3; ++t) f += oracle::random_form(rng, n, d(rng), d(rng), 2);
  return f;
}

std::vector<ManifoldSpec> all_specs() {
  return {catalog::torus(3), catalog::iwasawa(),     catalog::eta_beta(2),
          catalog::eta_beta(3), catalog::i3_t(GaussianRational(Rational(1, 3))), catalog::i3_1(),
          catalog::efv8()};
}

}  // namespace

TEST_SUITE("nilmanifold") {
  TEST_CASE("validate catalog and rejections") {
    for (const auto& s : all_specs()) {
      auto r = validate(s);
      CHECK_MESSAGE(r.valid, s.name);
    }
    CHECK(validate(catalog::iwasawa()).parallelizable);
    CHECK(validate(catalog::eta_beta(2)).parallelizable);
    CHECK_FALSE(validate(catalog::efv8()).parallelizable);
    CHECK(validate(catalog::efv8()).rational_structure);
    CHECK_FALSE(validate(catalog::i3_1()).rational_structure);
    CHECK(catalog::eta_beta(2).d_phi[4] == mono(5, {1, 2}) + mono(5, {3, 4}));

    ManifoldSpec bad = catalog::torus(2);
    bad.name = "bad";
    bad.d_phi[1] = mono(2, {}, {1, 2});
    auto r = validate(bad);
    CHECK_FALSE(r.valid);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].find("(0,2)") != std::string::npos);

    // d^2 != 0: d phi3 = phi12, d phi1 = phi3 bar3
    ManifoldSpec nonnil = catalog::torus(3);
    nonnil.d_phi[2] = mono(3, {1, 2});
    nonnil.d_phi[0] = mono(3, {3}, {3});
    auto r2 = validate(nonnil);
    CHECK_FALSE(r2.valid);
    REQUIRE_FALSE(r2.violations.empty());
    CHECK(r2.violations[0].find("d^2") != std::string::npos);
  }

  TEST_CASE("differential examples") {
    auto i3 = catalog::iwasawa();
    Calculus c(i3);
    CHECK(c.del(Form::phi(3, 3)) == mono(3, {1, 2}));
    CHECK(c.delbar(Form::phi(3, 3)).is_zero());

    auto eb = catalog::eta_beta(2);
    Calculus ce(eb);
    CHECK(ce.d(mono(5, {1, 5})) == -mono(5, {1, 3, 4}));
    CHECK(leibniz_oracle(eb, mono(5, {1, 5})) == -mono(5, {1, 3, 4}));

    for (const auto& s : {catalog::i3_1(), catalog::efv8()}) {
      Form w(s.n);
      for (int j = 1; j <= s.n; ++j) w += sigma(1) * mono(s.n, {j}, {j});
      CHECK(Calculus(s).ddbar(w).is_zero());
    }
    auto i31 = catalog::i3_1();
    Form w(3);
    for (int j = 1; j <= 3; ++j) w += sigma(1) * mono(3, {j}, {j});
    Form expected = GaussianRational(0, Rational(-3, 4)) * mono(3, {1, 2, 3}, {1, 2});
    CHECK(Calculus(i31).del(wedge(w, w)) == expected);
  }

  TEST_CASE("differential agrees with the Leibniz oracle") {
    std::mt19937_64 rng(21);
    for (const auto& s : all_specs()) {
      Calculus c(s);
      for (int t = 0; t < 25; ++t) {
        Form f = random_invariant(rng, s.n);
        Form df = c.d(f);
        CHECK(df == leibniz_oracle(s, f));
        CHECK(df == c.del(f) + c.delbar(f));
      }
    }
  }

  TEST_CASE("operator laws") {
    std::mt19937_64 rng(22);
    for (const auto& s : all_specs()) {
      Calculus c(s);
      for (int t = 0; t < 40; ++t) {
        Form f = random_invariant(rng, s.n);
        CHECK(c.d(c.d(f)).is_zero());
        CHECK(c.del(c.del(f)).is_zero());
        CHECK(c.delbar(c.delbar(f)).is_zero());
        CHECK(c.del(c.delbar(f)) == -c.delbar(c.del(f)));
        CHECK(conjugate(c.del(f)) == c.delbar(conjugate(f)));
        CHECK(conjugate(c.d(f)) == c.d(conjugate(f)));
      }
    }
  }

  TEST_CASE("holomorphic spaces") {
    auto h = holomorphic_space(catalog::iwasawa(), 1);
    CHECK(h.size() == 3);
    auto e = holomorphic_space(catalog::efv8(), 1);
    REQUIRE(e.size() == 3);
    Rref<GaussianRational> rr(4);
    for (const auto& f : e) {
      SparseVec<GaussianRational> v;
      for (const auto& [k, c] : f.terms()) v[std::countr_zero(k.first)] = c;
      rr.insert(v);
    }
    CHECK(rr.in_span({{0, GaussianRational(1)}}));
    CHECK(rr.in_span({{1, GaussianRational(1)}}));
    CHECK(rr.in_span({{3, GaussianRational(1)}}));
    CHECK_FALSE(rr.in_span({{2, GaussianRational(1)}}));
    auto z = holomorphic_space(catalog::efv8(), 0);
    CHECK(z.size() == 1);
    for (int k = 0; k <= 5; ++k) CHECK(holomorphic_space(catalog::eta_beta(2), k).size() == binomial(5, k));
  }

  TEST_CASE("F pairing") {
    auto i3 = catalog::iwasawa();
    CHECK(F_pairing(i3, mono(3, {1, 2}), mono(3, {3})) == GaussianRational(1));
    CHECK(F_pairing(i3, mono(3, {1, 3}), mono(3, {2})) == GaussianRational(-1));
    CHECK(F_pairing(i3, mono(3, {1, 2}), mono(3, {1})) == GaussianRational(0));
    CHECK_THROWS(F_pairing(catalog::efv8(), mono(4, {1, 2}), mono(4, {3, 4})));
  }

  TEST_CASE("phk construction") {
    OptimizerOptions o;
    o.restarts = 16;
    for (const auto& s : {catalog::torus(3), catalog::iwasawa(), catalog::eta_beta(2)})
      for (int p = 1; p < s.n; ++p) {
        auto r = phk_construct(s, p);
        CHECK(Calculus(s).d(r.omega).is_zero());
        if (r.decomposition_simple) CHECK(verify_sp_decomposition(r.omega, r.factors).ok);
        if (p == s.n - 1) CHECK(r.decomposition_simple);
      }
    CHECK(phk_construct(catalog::torus(4), 2).omega == standard_pp(4, 2));
    auto b = phk_construct(catalog::iwasawa(), 2);
    CHECK(check_transverse(to_float(b.omega), o).status == Status::StrictlyIn);
    auto e4 = phk_construct(catalog::eta_beta(2), 4);
    CHECK(check_transverse(to_float(e4.omega), o).status == Status::StrictlyIn);
    CHECK_THROWS(phk_construct(catalog::efv8(), 2));
  }

  TEST_CASE("simple exact holomorphic forms") {
    auto eb = catalog::eta_beta(2);
    auto r3 = find_simple_exact_holomorphic(eb, 3);
    REQUIRE(r3.status == SearchStatus::Found);
    CHECK(verify_simple_exact(eb, *r3.alpha, *r3.beta));
    auto r2 = find_simple_exact_holomorphic(eb, 2);
    CHECK(r2.space_dim == 1);
    CHECK(r2.status == SearchStatus::CertifiedNone);
    auto r1 = find_simple_exact_holomorphic(eb, 1);
    CHECK(r1.status == SearchStatus::CertifiedNone);
    CHECK(verify_simple_exact(eb, -mono(5, {1, 3, 4}), mono(5, {1, 5})));
    for (int k = 1; k <= 3; ++k) CHECK(find_simple_exact_holomorphic(catalog::torus(3), k).status == SearchStatus::CertifiedNone);
    // I_3: E_2 is spanned by phi12, which is simple
    auto i3 = find_simple_exact_holomorphic(catalog::iwasawa(), 2);
    CHECK(i3.status == SearchStatus::Found);
  }

  TEST_CASE("groebner emptiness") {
    using groebner::Poly;
    auto poly = [](std::vector<std::pair<std::vector<int>, long>> t) {
      Poly p;
      for (auto& [m, c] : t) p.terms[m] = GaussianRational(c);
      return p;
    };
    // x^2 + y^2, xy: only the origin
    CHECK(groebner::projective_variety_empty({poly({{{2, 0}, 1}, {{0, 2}, 1}}), poly({{{1, 1}, 1}})}, 2));
    // x^2 - y^2 alone has projective zeros
    CHECK_FALSE(groebner::projective_variety_empty({poly({{{2, 0}, 1}, {{0, 2}, -1}})}, 2));
    // x y, y z, x z: coordinate points are zeros
    CHECK_FALSE(groebner::projective_variety_empty(
        {poly({{{1, 1, 0}, 1}}), poly({{{0, 1, 1}, 1}}), poly({{{1, 0, 1}, 1}})}, 3));
  }
}

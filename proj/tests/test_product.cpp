#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "pkahler/catalog.hpp"
#include "pkahler/product.hpp"

using namespace pkahler;

namespace {

Form mono(int n, std::initializer_list<int> I, std::initializer_list<int> J = {}) {
  return Form::monomial(n, from_indices(I), from_indices(J));
}

OptimizerOptions restarts(int r, std::uint64_t seed) {
  OptimizerOptions o;
  o.restarts = r;
  o.seed = seed;
  return o;
}

std::vector<ManifoldSpec> catalog_specs() {
  return {catalog::torus(1), catalog::torus(2), catalog::iwasawa(), catalog::eta_beta(2), catalog::i3_1(),
          catalog::efv8()};
}

// Fiber integral through the word oracle: base ^ (fiber generators in order) = e_sorted up to
// the sort sign, and that fiber word is dv / sigma.
Form push_oracle(const ProductSpec& P, const Form& f, Factor onto) {
  const int N = P.m + P.n;
  const bool left = onto == Factor::Left;
  const int lo = left ? P.m + 1 : 1, hi = left ? N : P.m, fiber = hi - lo + 1;
  oracle::Word fw;
  for (int i = lo; i <= hi; ++i) fw.push_back(i);
  for (int i = lo; i <= hi; ++i) fw.push_back(N + i);
  Form out(left ? P.m : P.n);
  for (const auto& [w, c] : oracle::from_form(f)) {
    oracle::Word base;
    int hits = 0;
    for (int g : w) {
      int i = g <= N ? g : g - N;
      if (i >= lo && i <= hi)
        ++hits;
      else
        base.push_back(g);
    }
    if (hits != 2 * fiber) continue;
    oracle::Word u = left ? base : fw;
    u.insert(u.end(), (left ? fw : base).begin(), (left ? fw : base).end());
    int s = oracle::sort_sign(u);
    Mask I = 0, J = 0;
    for (int g : base) {
      int i = g <= N ? g : g - N;
      if (!left) i -= P.m;
      (g <= N ? I : J) |= bit(i);
    }
    GaussianRational v = c / sigma(fiber);
    out.add(I, J, s > 0 ? v : -v);
  }
  return out;
}

Form random_high(std::mt19937_64& rng, int N, int lo) {
  std::uniform_int_distribution<int> d(lo, N);
  Form f(N);
  for (int t = 0; t < 3; ++t) f += oracle::random_form(rng, N, d(rng), d(rng), 3);
  return f;
}

// I_{3,1} ladder from the standard omega: omega and omega^2/2 (with its S component).
std::vector<LadderForm> i31_ladder(KClass cls, int from = 1) {
  auto X = catalog::i3_1();
  std::vector<LadderForm> out;
  for (int s = from; s <= 2; ++s) {
    Form om = standard_pp(3, s);
    auto aux = lift(closure_subspace(X, s, cls), om);
    REQUIRE(aux.has_value());
    out.push_back({s, om, *aux});
  }
  return out;
}

std::vector<LadderForm> phk_ladder(const ManifoldSpec& Y, int q, KClass cls) {
  std::vector<LadderForm> out;
  for (int s = q; s < Y.n; ++s) {
    Form om = phk_construct(Y, s).omega;
    auto aux = lift(closure_subspace(Y, s, cls), om);
    REQUIRE(aux.has_value());
    out.push_back({s, om, *aux});
  }
  return out;
}

void check_positive(const ProductSpec& P, const ThetaForm& t, int restarts_n = 64) {
  INFO(P.combined.name << " j=" << t.j << " " << to_string(t.cls));
  auto c = check_theta(P, t, restarts(restarts_n, 5), 1000);
  CHECK(c.closure);
  CHECK((c.positive == Status::In || c.positive == Status::StrictlyIn));
  CHECK(c.transverse == Status::StrictlyIn);
  CHECK(c.sample_min > 0);
  CHECK(c.plane_min > 1e-6);
}

void check_product_sound(const ProductTable& T) {
  CHECK(T.contradictions.empty());
  CHECK(table_consistent(T.table));
  for (const auto& [key, cell] : T.table.cells) {
    INFO(T.table.spec_name << " " << key.first << to_string(key.second) << " " << cell.decision.method);
    const auto& d = cell.decision;
    if (d.verdict == Verdict::Yes && d.omega) {
      CHECK(verify_closure(T.spec.combined, key.second, *d.omega, d.aux));
      CHECK(check_transverse(to_float(*d.omega), restarts(64, 9)).status == Status::StrictlyIn);
    }
    if (d.cert) CHECK(verify_certificate(T.spec.combined, *d.cert).ok);
  }
}

}  // namespace

TEST_SUITE("product") {
  TEST_CASE("product specs") {
    auto P = product_spec(catalog::torus(1), catalog::torus(2));
    CHECK(P.combined.n == 3);
    for (const auto& f : P.combined.d_phi) CHECK(f.is_zero());

    auto Q = product_spec(catalog::i3_1(), catalog::eta_beta(2));
    CHECK(Q.combined.n == 8);
    CHECK(validate(Q.combined).valid);
    CHECK(Q.combined.d_phi[7] == mono(8, {4, 5}) + mono(8, {6, 7}));

    auto R = product_spec(catalog::iwasawa(), catalog::iwasawa());
    CHECK(R.combined.n == 6);
    CHECK(validate(R.combined).valid);
    CHECK(is_parallelizable(R.combined));
  }

  TEST_CASE("pullback commutes with the differentials") {
    std::mt19937_64 rng(3);
    for (const auto& X : catalog_specs())
      for (const auto& Y : catalog_specs()) {
        auto P = product_spec(X, Y);
        INFO(P.combined.name);
        for (int i = 1; i <= X.n; ++i)
          for (const Form& g : {Form::phi(X.n, i), Form::phibar(X.n, i)})
            CHECK(differential(P.combined, pull_left(P, g), Op::D) == pull_left(P, differential(X, g, Op::D)));
        for (int i = 1; i <= Y.n; ++i)
          for (const Form& g : {Form::phi(Y.n, i), Form::phibar(Y.n, i)})
            CHECK(differential(P.combined, pull_right(P, g), Op::D) == pull_right(P, differential(Y, g, Op::D)));
        for (Op op : {Op::D, Op::Del, Op::DelBar}) {
          Form f = oracle::random_form(rng, Y.n, 1, 1, 3) + oracle::random_form(rng, Y.n, 2, 0, 2);
          CHECK(differential(P.combined, pull_right(P, f), op) == pull_right(P, differential(Y, f, op)));
        }
      }
  }

  TEST_CASE("pushforward on simple products") {
    auto P = product_spec(catalog::torus(1), catalog::torus(1));
    Form theta = wedge(pull_left(P, standard_pp(1, 1)), pull_right(P, standard_pp(1, 1)));
    CHECK(pushforward_projection(P, theta, Factor::Left) == standard_pp(1, 1));
    CHECK(pushforward_projection(P, theta, Factor::Right) == standard_pp(1, 1));
    CHECK(pushforward_projection(P, pull_right(P, standard_pp(1, 1)), Factor::Left) ==
          Form::constant(1, GaussianRational(1)));
    CHECK_THROWS_AS(pushforward_projection(P, pull_left(P, Form::phi(1, 1)), Factor::Right), std::invalid_argument);
    CHECK_THROWS_AS(pushforward_projection(P, Form::constant(2, GaussianRational(1)), Factor::Left),
                    std::invalid_argument);
  }

  TEST_CASE("pushforward laws on random forms") {
    std::mt19937_64 rng(11);
    const std::vector<std::pair<ManifoldSpec, ManifoldSpec>> pairs = {
        {catalog::efv8(), catalog::iwasawa()},
        {catalog::i3_1(), catalog::eta_beta(2)},
        {catalog::eta_beta(2), catalog::torus(2)},
        {catalog::iwasawa(), catalog::i3_1()}};
    for (const auto& [X, Y] : pairs) {
      auto P = product_spec(X, Y);
      const int N = P.m + P.n;
      INFO(P.combined.name);
      for (int t = 0; t < 25; ++t) {
        for (Factor onto : {Factor::Left, Factor::Right}) {
          const int fiber = onto == Factor::Left ? P.n : P.m;
          const int base = onto == Factor::Left ? P.m : P.n;
          // a base form pulled back has no fiber volume
          if (fiber <= base) {
            std::uniform_int_distribution<int> d(fiber, base);
            Form f = oracle::random_form(rng, base, d(rng), d(rng), 3);
            Form g = onto == Factor::Left ? pull_left(P, f) : pull_right(P, f);
            CHECK(pushforward_projection(P, g, onto).is_zero());
          }
          Form F = random_high(rng, N, fiber);
          F += wedge(onto == Factor::Left ? pull_right(P, volume_form<GaussianRational>(P.n))
                                          : pull_left(P, volume_form<GaussianRational>(P.m)),
                     onto == Factor::Left ? pull_left(P, oracle::random_form(rng, P.m, 1, 1, 2))
                                          : pull_right(P, oracle::random_form(rng, P.n, 1, 0, 2)));
          Form pf = pushforward_projection(P, F, onto);
          CHECK(pf == push_oracle(P, F, onto));
          const ManifoldSpec& B = onto == Factor::Left ? X : Y;
          for (Op op : {Op::D, Op::Del, Op::DelBar})
            CHECK(pushforward_projection(P, differential(P.combined, F, op), onto) == differential(B, pf, op));
        }
      }
    }
  }

  TEST_CASE("pushforward keeps transverse forms transverse") {
    auto P = product_spec(catalog::i3_1(), catalog::eta_beta(2));
    LadderInput in{KClass::PL, 1, 3, i31_ladder(KClass::PL), phk_ladder(P.right, 3, KClass::PL)};
    auto t6 = theta_form(P, in, 6);
    Form down = pushforward_projection(P, t6.theta, Factor::Left);
    CHECK(down.is_pure(1, 1));
    CHECK(check_transverse(to_float(down), restarts(64, 1)).status == Status::StrictlyIn);
    Form side = pushforward_projection(P, t6.theta, Factor::Right);
    CHECK(side.is_pure(3, 3));
    CHECK(check_transverse(to_float(side), restarts(64, 1)).status == Status::StrictlyIn);
  }

  TEST_CASE("ladder hypotheses") {
    auto Y = catalog::eta_beta(2);
    SUBCASE("all del-closed") {
      auto P = product_spec(catalog::torus(2), Y);
      LadderInput in{KClass::K, 1, 3, phk_ladder(P.left, 1, KClass::K), phk_ladder(Y, 3, KClass::K)};
      auto r = check_ladder_hypotheses(P, in);
      CHECK(r.ok);
      CHECK(r.left_shorter);
      CHECK(r.j_min == 6);
      CHECK(r.j_max == 6);
    }
    SUBCASE("left ladder not del-closed, right partners closed") {
      auto P = product_spec(catalog::i3_1(), Y);
      auto left = i31_ladder(KClass::PL);
      CHECK_FALSE(differential(P.left, left[1].omega, Op::Del).is_zero());
      for (const auto& r : phk_ladder(Y, 3, KClass::PL)) CHECK(differential(Y, r.omega, Op::Del).is_zero());
      LadderInput in{KClass::PL, 1, 3, left, phk_ladder(Y, 3, KClass::PL)};
      auto r = check_ladder_hypotheses(P, in);
      CHECK_MESSAGE(r.ok, (r.violations.empty() ? "" : r.violations[0]));
      CHECK(r.j_min == 6);
      CHECK(r.j_max == 7);
    }
    SUBCASE("both sides violate") {
      auto P = product_spec(catalog::i3_1(), catalog::i3_1());
      LadderInput in{KClass::PL, 1, 1, i31_ladder(KClass::PL), i31_ladder(KClass::PL)};
      auto r = check_ladder_hypotheses(P, in);
      CHECK_FALSE(r.ok);
      REQUIRE(r.violations.size() == 1);
      CHECK(r.violations[0] == "a = 1: del Omega_2 != 0 and del Phi_2 != 0");
      CHECK_THROWS_WITH_AS(theta_form(P, in, 4), doctest::Contains("del Phi_2"), std::invalid_argument);
    }
    SUBCASE("negative eigenvalue, missing rung, bad start") {
      auto X = catalog::torus(4);
      auto P = product_spec(X, catalog::torus(2));
      auto wp = find_wp_interior_nonpositive(4, 2, restarts(64, 2));
      REQUIRE(wp.has_value());
      LadderInput in{KClass::K, 2, 1, {{2, *wp, {}}, {3, standard_pp(4, 3), {}}}, {{1, standard_pp(2, 1), {}}}};
      auto r = check_ladder_hypotheses(P, in);
      CHECK_FALSE(r.ok);
      REQUIRE(r.violations.size() == 1);
      CHECK(r.violations[0] == "Omega_2 has a negative eigenvalue");

      in.left = {{3, standard_pp(4, 3), {}}};
      r = check_ladder_hypotheses(P, in);
      REQUIRE(r.violations.size() == 1);
      CHECK(r.violations[0] == "Omega_2 missing");

      in.p = 4;
      r = check_ladder_hypotheses(P, in);
      CHECK_FALSE(r.ok);
      CHECK(r.violations[0].find("outside 1..3") != std::string::npos);
    }
  }

  TEST_CASE("theta on the I31 x eta-beta-5 product") {
    auto P = product_spec(catalog::i3_1(), catalog::eta_beta(2));
    LadderInput pl{KClass::PL, 1, 3, i31_ladder(KClass::PL), phk_ladder(P.right, 3, KClass::PL)};
    auto t6 = theta_form(P, pl, 6);
    CHECK(t6.summands == std::vector<std::pair<int, int>>{{1, 5}, {2, 4}, {3, 3}});
    CHECK(Calculus(P.combined).ddbar(t6.theta).is_zero());
    check_positive(P, t6, 256);
    CHECK_THROWS_WITH_AS(theta_form(P, pl, 5), doctest::Contains("m + n - min(m - p, n - q) = 6"),
                         std::invalid_argument);

    // 2S on I31 and (3..4)S on eta-beta-5: only j = 7
    LadderInput s{KClass::S, 2, 3, i31_ladder(KClass::S, 2), phk_ladder(P.right, 3, KClass::S)};
    REQUIRE(check_ladder_hypotheses(P, s).ok);
    auto t7 = theta_form(P, s, 7);
    REQUIRE(t7.aux.size() == 1);
    CHECK_FALSE(t7.aux[0].is_zero());
    CHECK(differential(P.combined, assemble_closed_form(t7.theta, t7.aux), Op::D).is_zero());
    check_positive(P, t7);
    CHECK_THROWS_AS(theta_form(P, s, 6), std::invalid_argument);
  }

  TEST_CASE("balanced sides give the top power of the sum") {
    auto X = catalog::iwasawa();
    auto P = product_spec(X, X);
    LadderInput in{KClass::K, 2, 2, {{2, standard_pp(3, 2), {}}}, {{2, standard_pp(3, 2), {}}}};
    REQUIRE(check_ladder_hypotheses(P, in).ok);
    auto t = theta_form(P, in, 5);
    // omega^5/5! = omega_X^2/2 ^ omega_Y^3/6 + omega_X^3/6 ^ omega_Y^2/2
    CHECK(t.theta == standard_pp(6, 5));
    CHECK(verify_closure(P.combined, KClass::K, t.theta, t.aux));
  }

  TEST_CASE("tori products are closed and transverse") {
    for (int m : {2, 3})
      for (int n : {2, 3}) {
        auto P = product_spec(catalog::torus(m), catalog::torus(n));
        for (KClass c : kAllClasses) {
          LadderInput in{c, 1, 1, phk_ladder(P.left, 1, c), phk_ladder(P.right, 1, c)};
          auto r = check_ladder_hypotheses(P, in);
          REQUIRE(r.ok);
          for (int j = r.j_min; j <= r.j_max; ++j) check_positive(P, theta_form(P, in, j));
        }
      }
  }

  TEST_CASE("Kaehler factor") {
    auto Y = catalog::eta_beta(2);
    for (int m : {1, 2, 3}) {
      auto P = product_spec(catalog::torus(m), Y);
      for (KClass c : kAllClasses) {
        auto lad = phk_ladder(Y, 3, c);
        for (int j = m + 3; j < m + 5; ++j) check_positive(P, theta_kahler(P, standard_pp(m, 1), c, 3, lad, j));
        CHECK_THROWS_WITH_AS(theta_kahler(P, standard_pp(m, 1), c, 3, lad, m + 2), doctest::Contains("dim + q"),
                             std::invalid_argument);
      }
    }
    // the same with the Kaehler factor on the right
    auto P = product_spec(Y, catalog::torus(2));
    for (int j = 5; j < 7; ++j)
      check_positive(P, theta_kahler(P, standard_pp(2, 1), KClass::PL, 3, phk_ladder(Y, 3, KClass::PL), j,
                                     Factor::Right));

    // surrogate index arithmetic: ladder from 2 starts at m + 2
    for (int m : {1, 2, 3}) {
      auto Q = product_spec(catalog::torus(m), catalog::iwasawa());
      std::vector<LadderForm> lad{{2, standard_pp(3, 2), {}}};
      check_positive(Q, theta_kahler(Q, standard_pp(m, 1), KClass::K, 2, lad, m + 2));
      CHECK_THROWS_AS(theta_kahler(Q, standard_pp(m, 1), KClass::K, 2, lad, m + 1), std::invalid_argument);
      // balanced Phi_{n-1}: the top power of the sum
      CHECK(theta_kahler(Q, standard_pp(m, 1), KClass::K, 2, lad, m + 2).theta == standard_pp(m + 3, m + 2));
    }

    auto Z = product_spec(catalog::i3_1(), Y);
    CHECK_THROWS_WITH_AS(theta_kahler(Z, standard_pp(3, 1), KClass::PL, 3, phk_ladder(Y, 3, KClass::PL), 6),
                         doctest::Contains("not a closed"), std::invalid_argument);
  }

  TEST_CASE("ladder products with eta-beta-5 across admissible j") {
    auto Y = catalog::eta_beta(2);
    auto tY = classification_table(Y);
    for (const auto& X : {catalog::torus(2), catalog::torus(3), catalog::iwasawa()}) {
      auto P = product_spec(X, Y);
      auto tX = classification_table(X);
      int built = 0;
      for (KClass c : kAllClasses) {
        auto lx = ladder_from_table(X, tX, c), ly = ladder_from_table(Y, tY, c);
        REQUIRE(lx.has_value());
        REQUIRE(ly.has_value());
        CHECK(ly->first == 3);
        LadderInput in{c, lx->first, ly->first, lx->second, ly->second};
        auto r = check_ladder_hypotheses(P, in);
        REQUIRE(r.ok);
        for (int j = r.j_min; j <= r.j_max; ++j, ++built) check_positive(P, theta_form(P, in, j));
      }
      CHECK(built > 0);
    }
  }

  TEST_CASE("I31 x eta-beta-5 table") {
    auto T = product_table(catalog::i3_1(), catalog::eta_beta(2));
    check_product_sound(T);
    const auto& t = T.table;
    for (int p : {1, 2, 3, 4, 5})
      for (KClass c : kAllClasses) CHECK(t.at(p, c) == Verdict::No);
    for (KClass c : {KClass::K, KClass::WK, KClass::S}) CHECK(t.at(6, c) == Verdict::No);
    CHECK(t.at(6, KClass::PL) == Verdict::Yes);
    CHECK(t.at(7, KClass::K) == Verdict::No);
    CHECK(t.at(7, KClass::WK) == Verdict::No);
    CHECK(t.at(7, KClass::S) == Verdict::Yes);
    CHECK(t.at(7, KClass::PL) == Verdict::Yes);
    // sources
    for (int p : {1, 2})
      CHECK(t.cells.at({p, KClass::PL}).decision.method.rfind("restriction to a fiber", 0) == 0);
    for (int p : {4, 5})
      CHECK(t.cells.at({p, KClass::PL}).decision.method.rfind("pushforward", 0) == 0);
    for (auto key : {std::pair{6, KClass::S}, std::pair{7, KClass::WK}})
      CHECK(t.cells.at(key).decision.method == "pushforward along the compact factor eta_beta 2: i3_1 is not " +
                                                   std::to_string(key.first - 5) + to_string(key.second));
    const auto& c3 = t.cells.at({3, KClass::PL}).decision;
    REQUIRE(c3.cert.has_value());
    CHECK(c3.cert->kind == CertKind::SimpleExactHolomorphic);
    const auto& c6 = t.cells.at({6, KClass::PL}).decision;
    REQUIRE(c6.omega.has_value());
    CHECK(Calculus(T.spec.combined).ddbar(*c6.omega).is_zero());
    CHECK(min_over_grassmannian(to_float(*c6.omega), restarts(256, 42)).value > 1e-6);
    CHECK(t.cells.at({7, KClass::S}).decision.omega.has_value());

    // the explicit witness: phi12 ^ phi'134 = -del(phi12 ^ phi'15)
    const int N = 8;
    Form alpha = mono(N, {1, 2, 4, 6, 7});
    Form beta = -mono(N, {1, 2, 4, 8});
    CHECK(differential(T.spec.combined, mono(N, {1, 2, 4, 8}), Op::Del) == -alpha);
    CHECK(verify_simple_exact(T.spec.combined, alpha, beta));
  }

  TEST_CASE("factor implications") {
    auto flat = product_table(catalog::torus(1), catalog::torus(2));
    check_product_sound(flat);
    for (const auto& [key, cell] : flat.table.cells) CHECK(cell.decision.verdict == Verdict::Yes);
    auto flat2 = product_table(catalog::torus(2), catalog::torus(2));
    for (const auto& [key, cell] : flat2.table.cells) CHECK(cell.decision.verdict == Verdict::Yes);

    // I3 is not 1K, so I3 x curve is not 2K
    auto T = product_table(catalog::iwasawa(), catalog::torus(1));
    check_product_sound(T);
    CHECK(T.table.at(2, KClass::K) == Verdict::No);
    CHECK(T.table.cells.at({2, KClass::K}).decision.method.rfind("pushforward", 0) == 0);
    CHECK(T.table.at(3, KClass::K) == Verdict::Yes);

    // a Yes cell contradicting a factor is reported, not overwritten
    auto X = classification_table(catalog::iwasawa());
    auto Y = classification_table(catalog::torus(2));
    ClassificationTable prod;
    prod.spec_name = "iwasawa x torus 2";
    prod.n = 5;
    for (int p = 1; p < 5; ++p)
      for (KClass c : kAllClasses) prod.cells[{p, c}] = Cell{};
    prod.cells[{1, KClass::K}].decision.verdict = Verdict::Yes;
    auto r = factor_implications(X, Y, prod);
    REQUIRE(r.contradictions.size() == 1);
    CHECK(r.contradictions[0] == "1K is Yes but restriction to a fiber: iwasawa is not 1K");
    CHECK(prod.at(1, KClass::K) == Verdict::Yes);
    CHECK(prod.at(1, KClass::WK) == Verdict::No);
  }

  TEST_CASE("ladder bounds are sharp on compact pairs") {
    const std::vector<std::pair<ManifoldSpec, ManifoldSpec>> pairs = {
        {catalog::i3_1(), catalog::eta_beta(2)}, {catalog::iwasawa(), catalog::eta_beta(2)},
        {catalog::torus(2), catalog::eta_beta(2)}, {catalog::iwasawa(), catalog::iwasawa()},
        {catalog::efv8(), catalog::torus(1)},     {catalog::iwasawa(), catalog::torus(2)}};
    for (const auto& [X, Y] : pairs) {
      auto T = product_table(X, Y);
      check_product_sound(T);
      const int m = X.n, n = Y.n;
      for (KClass c : kAllClasses) {
        auto lx = m > 1 ? ladder_from_table(X, T.left, c) : std::nullopt;
        auto ly = n > 1 ? ladder_from_table(Y, T.right, c) : std::nullopt;
        if (!lx || !ly) continue;
        const int p = lx->first, q = ly->first;
        if (p == 1 && q == 1) continue;
        const int jb = m + n - std::min(m - p, n - q);
        INFO(T.table.spec_name << " " << to_string(c) << " bound " << jb);
        // the factor at the short side is not (start - 1)-c, so pushforward alone rules out jb - 1
        if ((m - p <= n - q && p > 1) || (n - q <= m - p && q > 1)) {
          ClassificationTable empty;
          empty.spec_name = T.table.spec_name;
          empty.n = m + n;
          for (int r = 1; r < m + n; ++r)
            for (KClass k : kAllClasses) empty.cells[{r, k}] = Cell{};
          factor_implications(T.left, T.right, empty);
          CHECK(empty.at(jb - 1, c) == Verdict::No);
          CHECK(empty.cells.at({jb - 1, c}).decision.method.rfind("pushforward", 0) == 0);
          CHECK(T.table.at(jb - 1, c) == Verdict::No);
        }
      }
    }
  }
}

#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "pkahler/catalog.hpp"
#include "pkahler/report.hpp"

using namespace pkahler;
namespace rep = pkahler::report;

TEST_SUITE("report") {
  TEST_CASE("forms and certificates round trip through JSON") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
      Form f = oracle::random_form(rng, 4, t % 3, (t / 3) % 3) + oracle::random_form(rng, 4, 1, 2);
      CHECK(rep::form_from_json(rep::form_to_json(f), 4) == f);
      CHECK(rep::form_from_json(rep::Json::parse(rep::form_to_json(f).dump()), 4) == f);
    }
    CHECK_THROWS(rep::form_from_json(rep::Json::parse(R"([{"phi":[5],"bar":[],"c":"1"}])"), 4));
    CHECK_THROWS(rep::form_from_json(rep::Json::parse(R"([{"phi":[1,1],"bar":[],"c":"1"}])"), 4));

    auto e = decide(catalog::efv8(), 3, KClass::S);
    REQUIRE(e.cert.has_value());
    auto back = rep::certificate_from_json(rep::certificate_to_json(*e.cert), 4);
    CHECK(back.kind == e.cert->kind);
    CHECK(back.T == e.cert->T);
    CHECK(back.sp_weights == e.cert->sp_weights);
    CHECK(*back.potential == *e.cert->potential);
    CHECK(verify_certificate(catalog::efv8(), back).ok);
  }

  TEST_CASE("spec digest") {
    auto s = catalog::iwasawa();
    CHECK(rep::spec_digest(s).size() == 64);
    CHECK(rep::spec_digest(s) == rep::spec_digest(catalog::iwasawa()));
    CHECK(rep::spec_digest(s) != rep::spec_digest(catalog::torus(3)));
    auto j = rep::spec_to_json(s);
    CHECK(rep::spec_from_json(j).d_phi == s.d_phi);
    j["sha256"] = std::string(64, '0');
    CHECK_THROWS_WITH(rep::spec_from_json(j), doctest::Contains("digest"));
  }

  TEST_CASE("classify reports verify and catch tampering") {
    for (const auto& s : {catalog::efv8(), catalog::i3_1(), catalog::eta_beta(2), catalog::iwasawa()}) {
      DecideOptions o;
      auto r = rep::classify_report(s, classification_table(s, o), o);
      auto v = rep::verify_report(r);
      CHECK_MESSAGE(v.ok, s.name);
      CHECK(v.checked == 4 * (s.n - 1));
      CHECK(rep::options_from_json(r["options"]).rounds == o.rounds);
    }
    auto s = catalog::i3_1();
    auto r = rep::classify_report(s, classification_table(s), {});
    auto bad = r;
    for (auto& c : bad["table"]["cells"])
      if (c.contains("omega")) {
        c["omega"][0]["c"] = "-1/2 i";  // no longer positive
        break;
      }
    CHECK_FALSE(rep::verify_report(bad).ok);
    bad = r;
    for (auto& c : bad["table"]["cells"])
      if (c.contains("implied_from")) {
        c["implied_from"]["class"] = "PL";
        c["implied_from"]["p"] = 2;
        break;
      }
    CHECK_FALSE(rep::verify_report(bad).ok);
    bad = r;
    for (auto& c : bad["table"]["cells"])
      if (c.contains("certificate")) {
        c.erase("certificate");
        break;
      }
    CHECK_FALSE(rep::verify_report(bad).ok);
    CHECK_FALSE(rep::verify_report(rep::Json::parse("{\"tool\": \"pkahler\"}")).ok);
  }

  TEST_CASE("product reports verify") {
    auto t = product_table(catalog::iwasawa(), catalog::torus(1));
    auto r = rep::product_report(t, {});
    auto v = rep::verify_report(r);
    CHECK(v.ok);
    // a factor-derived No without support in the factor tables is rejected
    auto bad = r;
    for (auto& c : bad["left"]["table"]["cells"]) c["verdict"] = "Unknown";
    CHECK_FALSE(rep::verify_report(bad).ok);
  }

  TEST_CASE("dump is deterministic") {
    auto s = catalog::efv8();
    DecideOptions o;
    o.seed = 5;
    auto a = rep::dump(rep::classify_report(s, classification_table(s, o), o));
    auto b = rep::dump(rep::classify_report(s, classification_table(s, o), o));
    CHECK(a == b);
    CHECK(a.back() == '\n');
  }
}

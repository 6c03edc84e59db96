#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdom/errors.hpp"
#include "qdom/kraus.hpp"
#include "qdom/poset.hpp"
#include "qdom/rational.hpp"
#include "qdom/report.hpp"
#include "qdom/subdist.hpp"
#include "qdom/wstar.hpp"

#include <sstream>

using namespace qdom;

TEST_CASE("rational parsing and printing") {
    CHECK(rat_to_string(Rat(1, 3)) == "1/3");
    CHECK(rat_to_string(Rat(4, 2)) == "2");
    CHECK(rat_to_string(Rat(-3, 9)) == "-1/3");
    CHECK(*parse_rat("7/21") == Rat(1, 3));
    CHECK(*parse_rat("-5") == Rat(-5));
    CHECK_FALSE(parse_rat("1/0").has_value());
    CHECK_FALSE(parse_rat("a/b").has_value());
    CHECK_FALSE(parse_rat("").has_value());
    CHECK(pow2_inv(4) == Rat(1, 16));
    // round-trip property over random rationals
    Rng rng(95);
    for (int t = 0; t < 200; ++t) {
        const Rat r = rng.unit_rat(1000);
        CHECK(*parse_rat(rat_to_string(r)) == r);
    }
}

TEST_CASE("deterministic rng streams") {
    Rng a(42), b(42), c(43);
    for (int t = 0; t < 32; ++t) {
        CHECK(a.bits() == b.bits());
    }
    bool differs = false;
    Rng a2(42);
    for (int t = 0; t < 32; ++t)
        if (a2.bits() != c.bits()) differs = true;
    CHECK(differs);
}

TEST_CASE("matrix text round-trip across many scales (property)") {
    Rng rng(97);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 6));
        mat::Matrix m(n, n);
        const double scale = std::pow(10.0, static_cast<double>(rng.range(-12, 12)));
        for (auto& z : m.data()) z = mat::Complex(rng.gauss() * scale, rng.gauss() * scale);
        CHECK(mat::parse_text(mat::to_text(m)) == m);
    }
}

TEST_CASE("kraus format: multi-block maps with rectangular items") {
    Rng rng(99);
    const wstar::AlgebraSignature src({3, 1}), dst({2, 2});
    for (int t = 0; t < 10; ++t) {
        const auto f = cp::random_subunital_map(rng, src, dst);
        const auto back = cp::parse_kraus(cp::to_text(f));
        CHECK(cp::distance(cp::Transfer::from_kraus(f), cp::Transfer::from_kraus(back)) <= 1e-12);
    }
    // a hand-written file with explicit sections
    const std::string text =
        "# a qubit channel\n"
        "map blocks 2 -> blocks 2\n"
        "item 0 0\n"
        "dim 2\n"
        "0.5+0i 0+0i\n"
        "0+0i 0.5+0i\n";
    const auto f = cp::parse_kraus(text);
    CHECK(f.items().size() == 1);
    CHECK(f.sub_unital());
}

TEST_CASE("poset text round-trip (property over the enumeration)") {
    for (const auto& p : order::all_posets(3)) {
        const auto back = order::parse_poset(order::to_text(p));
        CHECK(back == p);
    }
}

TEST_CASE("subdistribution text accumulates duplicate lines") {
    std::istringstream in("a 1/4\nb 1/4\na 1/4\n");
    const auto d = subdist::read_subdistribution(in);
    CHECK(d.weight("a") == Rat(1, 2));
    CHECK(d.weight("b") == Rat(1, 4));
}

TEST_CASE("report canonical form and schema") {
    Report r;
    r.suite = "demo";
    r.fail("z-check", "ref", "bad");
    r.pass("a-check", "ref");
    r.skip("m-check", "ref", "why");
    const auto json = r.to_json();
    // sorted by name, witness null on pass
    const auto a_pos = json.find("a-check");
    const auto m_pos = json.find("m-check");
    const auto z_pos = json.find("z-check");
    CHECK(a_pos < m_pos);
    CHECK(m_pos < z_pos);
    CHECK(json.find("\"witness\": null") != std::string::npos);
    CHECK(json.find("\"paper_ref\"") != std::string::npos);
    CHECK_FALSE(r.all_pass());
    CHECK(r.failures() == 1);

    const auto schema = report_schema();
    CHECK(schema.find("paper_ref") != std::string::npos);
    CHECK(schema.find("pass | fail | skip") != std::string::npos);

    // identical content gives byte-identical json
    Report r2;
    r2.suite = "demo";
    r2.fail("z-check", "ref", "bad");
    r2.pass("a-check", "ref");
    r2.skip("m-check", "ref", "why");
    CHECK(r.to_json() == r2.to_json());
}

TEST_CASE("element format: consecutive blocks in signature order") {
    const wstar::AlgebraSignature sig({2, 1});
    Rng rng(103);
    const auto x = wstar::random_element(rng, sig);
    std::istringstream in(wstar::to_text(x));
    const auto back = wstar::read_element(in, sig);
    CHECK(wstar::stack_norm(back - x) == 0.0);
    // missing block
    std::istringstream missing("dim 2\n1+0i 0+0i\n0+0i 1+0i\n");
    CHECK_THROWS_AS(wstar::read_element(missing, sig), ParseError);
}

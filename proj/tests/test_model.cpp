#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "json.hpp"
#include "polybound/errors.hpp"
#include "polybound/gen.hpp"
#include "polybound/model.hpp"
#include "polybound/rng.hpp"
#include "test_util.hpp"

using namespace polybound;

namespace {

MultilinearPolynomial simple_pair() {
    MultilinearPolynomial poly(2);
    poly.add_term(Hyperedge::checked({1, 2}), Rat(1));
    return poly;
}

}  // namespace

TEST_CASE("rationals convert exactly from doubles") {
    CHECK(rat_from_double(0.5) == Rat(1, 2));
    CHECK(rat_from_double(0.125) == Rat(1, 8));
    CHECK(rat_from_double(-3.0) == Rat(-3));
    // 0.1 is not exactly one tenth in binary; conversion must keep the bits
    CHECK(rat_from_double(0.1) == Rat(BigInt("3602879701896397"), BigInt("36028797018963968")));
    CHECK(to_double(rat_from_double(0.1)) == 0.1);
    CHECK(parse_rat("2/7") == Rat(2, 7));
    CHECK(parse_rat("-5") == Rat(-5));
    CHECK_THROWS_AS(parse_rat("x/y"), SchemaError);
    CHECK_THROWS_AS(parse_rat("1/0"), SchemaError);
}

TEST_CASE("hyperedge constructors") {
    auto e = Hyperedge::checked({3, 1, 2});
    CHECK(e.vertices() == std::vector<int>{1, 2, 3});
    CHECK(e.contains(2));
    CHECK_FALSE(e.contains(4));
    CHECK_THROWS_AS(Hyperedge::checked({1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Hyperedge::checked({0}), std::invalid_argument);
    CHECK(Hyperedge().empty());
}

TEST_CASE("validate flags each broken invariant") {
    CHECK(validate(simple_pair()).empty());

    MultilinearPolynomial dup(3);
    dup.set_term_raw(Hyperedge::raw({3, 3}), Rat(1));
    auto problems = validate(dup);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("duplicate vertex 3") != std::string::npos);

    MultilinearPolynomial oversize(3, 2);
    oversize.set_term_raw(Hyperedge::raw({1, 2, 3}), Rat(1));
    problems = validate(oversize);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("power") != std::string::npos);

    MultilinearPolynomial out_of_range(2);
    out_of_range.set_term_raw(Hyperedge::raw({5}), Rat(1));
    CHECK(validate(out_of_range).size() == 1);

    MultilinearPolynomial zero_weight(2);
    zero_weight.set_term_raw(Hyperedge::raw({1}), Rat(0));
    CHECK(validate(zero_weight).size() == 1);
}

TEST_CASE("evaluate") {
    CHECK(evaluate(simple_pair(), {2.0, 3.0}) == doctest::Approx(6.0));

    MultilinearPolynomial empty(3);
    CHECK(evaluate(empty, {1.0, 1.0, 1.0}) == 0.0);

    MultilinearPolynomial two(3);
    two.add_term(Hyperedge::checked({1, 2}), Rat(2));
    two.add_term(Hyperedge::checked({2, 3}), Rat(3));
    CHECK(evaluate(two, {1.0, 1.0, 1.0}) == doctest::Approx(5.0));

    CHECK_THROWS_AS(evaluate(two, {1.0}), std::invalid_argument);

    // the empty edge contributes its weight as a constant
    MultilinearPolynomial with_const(1);
    with_const.add_term(Hyperedge(), Rat(7));
    with_const.add_term(Hyperedge::checked({1}), Rat(2));
    CHECK(evaluate(with_const, {10.0}) == doctest::Approx(27.0));
}

TEST_CASE("evaluate is linear in the weight map") {
    RngStream rng(11, 0);
    PolyGenOptions opts;
    for (int i = 0; i < 20; ++i) {
        int n = uniform_int(rng, 2, 6);
        opts.n_min = opts.n_max = n;
        auto f = random_polynomial(rng, opts);
        auto g = random_polynomial(rng, opts);
        MultilinearPolynomial sum(n);
        for (const auto& [e, w] : f.terms()) sum.add_term(e, w);
        for (const auto& [e, w] : g.terms()) sum.add_term(e, w);
        std::vector<double> x(n);
        for (int v = 0; v < n; ++v) x[v] = uniform_real(rng, -2.0, 2.0);
        CHECK(rel_close(evaluate(sum, x), evaluate(f, x) + evaluate(g, x), 1e-12));
    }
}

TEST_CASE("center expands a product edge binomially") {
    // f = x1 x2 with both means m: weights m^2, m, m, 1
    Rat m(1, 2);
    auto centered = center(simple_pair(), {m, m});
    CHECK(centered.coefficient(Hyperedge()) == m * m);
    CHECK(centered.coefficient(Hyperedge::checked({1})) == m);
    CHECK(centered.coefficient(Hyperedge::checked({2})) == m);
    CHECK(centered.coefficient(Hyperedge::checked({1, 2})) == Rat(1));
    CHECK(centered.term_count() == 4);
}

TEST_CASE("center with zero means is the identity") {
    RngStream rng(12, 0);
    PolyGenOptions opts;
    for (int i = 0; i < 10; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto centered = center(poly, std::vector<Rat>(poly.n(), Rat(0)));
        CHECK(centered.terms() == poly.terms());
    }
}

TEST_CASE("center merges contributions across edges") {
    // f = x1 x2 + x2 x3 with unit means: weight of {2} is 1 + 1 = 2
    MultilinearPolynomial poly(3);
    poly.add_term(Hyperedge::checked({1, 2}), Rat(1));
    poly.add_term(Hyperedge::checked({2, 3}), Rat(1));
    auto centered = center(poly, {Rat(1), Rat(1), Rat(1)});
    CHECK(centered.coefficient(Hyperedge::checked({2})) == Rat(2));
    CHECK(centered.coefficient(Hyperedge()) == Rat(2));
}

TEST_CASE("centering identity holds pointwise") {
    RngStream rng(13, 0);
    PolyGenOptions opts;
    for (int i = 0; i < 100; ++i) {
        auto poly = random_polynomial(rng, opts);
        std::vector<Rat> means(poly.n());
        std::vector<double> means_d(poly.n());
        for (int v = 0; v < poly.n(); ++v) {
            means_d[v] = uniform_real(rng, -2.0, 2.0);
            means[v] = rat_from_double(means_d[v]);
        }
        auto centered = center(poly, means);
        std::vector<double> x(poly.n()), shifted(poly.n());
        for (int v = 0; v < poly.n(); ++v) {
            x[v] = uniform_real(rng, -2.0, 2.0);
            shifted[v] = x[v] - means_d[v];
        }
        double direct = evaluate(poly, x);
        CHECK(std::abs(evaluate(centered, shifted) - direct) <= 1e-9 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("split by sign and size") {
    MultilinearPolynomial poly(4);
    poly.add_term(Hyperedge::checked({1, 2}), Rat(1));
    poly.add_term(Hyperedge::checked({3, 4}), Rat(-1));
    auto parts = split_by_sign_and_size(poly);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].size == 2);
    CHECK(parts[1].size == 2);
    CHECK(parts[0].sign * parts[1].sign == -1);

    MultilinearPolynomial mixed(2);
    mixed.add_term(Hyperedge::checked({1}), Rat(1));
    mixed.add_term(Hyperedge::checked({1, 2}), Rat(1));
    parts = split_by_sign_and_size(mixed);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].size == 1);
    CHECK(parts[1].size == 2);
    CHECK(parts[0].sign == 1);
    CHECK(parts[1].sign == 1);

    // already homogeneous with one sign: a single part equal to the input
    parts = split_by_sign_and_size(simple_pair());
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].part.terms() == simple_pair().terms());
}

TEST_CASE("split parts sum pointwise to the original") {
    RngStream rng(14, 0);
    PolyGenOptions opts;
    opts.allow_constant_term = true;
    for (int i = 0; i < 20; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto parts = split_by_sign_and_size(poly);
        for (int p = 0; p < 20; ++p) {
            std::vector<double> x(poly.n());
            for (int v = 0; v < poly.n(); ++v) x[v] = uniform_real(rng, -2.0, 2.0);
            double sum = to_double(poly.coefficient(Hyperedge()));
            for (const auto& part : parts) sum += evaluate(part.part, x);
            CHECK(rel_close(sum, evaluate(poly, x), 1e-10));
        }
    }
}

TEST_CASE("polynomial JSON round trip and load errors") {
    auto j = nlohmann::json::parse(R"({"n": 3, "power": 2, "edges": [
        {"vertices": [2, 1], "weight": 0.5},
        {"vertices": [3], "weight": "1/3"}
    ]})");
    auto poly = MultilinearPolynomial::from_json(j);
    CHECK(poly.n() == 3);
    CHECK(poly.power() == 2);
    CHECK(poly.coefficient(Hyperedge::checked({1, 2})) == Rat(1, 2));
    CHECK(poly.coefficient(Hyperedge::checked({3})) == Rat(1, 3));

    auto round = MultilinearPolynomial::from_json(poly.to_json());
    CHECK(round.terms() == poly.terms());

    // duplicate vertex inside an edge names the edge
    auto bad = nlohmann::json::parse(R"({"n": 3, "edges": [{"vertices": [3, 3], "weight": 1}]})");
    CHECK_THROWS_WITH_AS(MultilinearPolynomial::from_json(bad),
                         doctest::Contains("duplicate vertex 3"), SchemaError);

    // duplicate vertex sets are a load-time error
    auto dup = nlohmann::json::parse(
        R"({"n": 2, "edges": [{"vertices": [1, 2], "weight": 1}, {"vertices": [2, 1], "weight": 2}]})");
    CHECK_THROWS_AS(MultilinearPolynomial::from_json(dup), SchemaError);

    CHECK_THROWS_AS(MultilinearPolynomial::from_json(nlohmann::json::parse("[]")), SchemaError);
}

TEST_CASE("builder merges weights and prunes zeros") {
    MultilinearPolynomial poly(2);
    poly.add_term(Hyperedge::checked({1, 2}), Rat(1));
    poly.add_term(Hyperedge::checked({2, 1}), Rat(-1));
    CHECK(poly.term_count() == 0);

    poly.add_term(Hyperedge::checked({1}), Rat(1, 2));
    poly.add_term(Hyperedge::checked({1}), Rat(1, 2));
    CHECK(poly.coefficient(Hyperedge::checked({1})) == Rat(1));

    // explicit power rejects larger edges at build time
    MultilinearPolynomial capped(3, 1);
    CHECK_THROWS_AS(capped.add_term(Hyperedge::checked({1, 2}), Rat(1)), std::invalid_argument);
}

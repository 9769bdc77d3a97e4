#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "polybound/errors.hpp"
#include "polybound/gen.hpp"
#include "polybound/moments.hpp"
#include "polybound/rng.hpp"
#include "test_util.hpp"

using namespace polybound;

namespace {

std::vector<DistributionSpec> repeated(const DistributionSpec& d, int n) {
    return std::vector<DistributionSpec>(n, d);
}

MultilinearPolynomial pair_poly(int n, int a, int b) {
    MultilinearPolynomial poly(n);
    poly.add_term(Hyperedge::checked({a, b}), Rat(1));
    return poly;
}

}  // namespace

TEST_CASE("exact mean") {
    auto coins = repeated(DistributionSpec::bernoulli(Rat(1, 2)), 2);
    CHECK(exact_mean_rat(pair_poly(2, 1, 2), coins) == Rat(1, 4));
    CHECK(exact_mean_rat(pair_poly(2, 1, 2), repeated(DistributionSpec::rademacher(), 2)) == Rat(0));

    MultilinearPolynomial f(2);
    f.add_term(Hyperedge::checked({1}), Rat(2));
    f.add_term(Hyperedge::checked({1, 2}), Rat(3));
    auto ones = repeated(DistributionSpec::discrete({{Rat(1), Rat(1)}}), 2);
    CHECK(exact_mean_rat(f, ones) == Rat(5));
}

TEST_CASE("exact variance") {
    // product of two coins: p^2 (1 - p^2)
    for (int num = 1; num <= 4; ++num) {
        Rat p(num, 5);
        auto dists = repeated(DistributionSpec::bernoulli(p), 2);
        CHECK(exact_variance_rat(pair_poly(2, 1, 2), dists) == p * p * (Rat(1) - p * p));
    }
    CHECK(exact_variance_rat(pair_poly(2, 1, 2), repeated(DistributionSpec::rademacher(), 2)) == Rat(1));

    MultilinearPolynomial constant(2);
    constant.add_term(Hyperedge(), Rat(7));
    CHECK(exact_variance_rat(constant, repeated(DistributionSpec::rademacher(), 2)) == Rat(0));
}

TEST_CASE("expansion moments on sign products") {
    auto rade = repeated(DistributionSpec::rademacher(), 2);
    CHECK(exact_moment_rat(pair_poly(2, 1, 2), rade, 2) == Rat(1));
    CHECK(exact_moment_rat(pair_poly(2, 1, 2), rade, 3) == Rat(0));
}

TEST_CASE("expansion agrees with the joint enumeration oracle") {
    // two disjoint coin pairs at k = 2: both routes give 5/8 uncentered,
    // and the variance 3/8 shows up as the centered second moment
    MultilinearPolynomial f(4);
    f.add_term(Hyperedge::checked({1, 2}), Rat(1));
    f.add_term(Hyperedge::checked({3, 4}), Rat(1));
    auto coins = repeated(DistributionSpec::bernoulli(Rat(1, 2)), 4);
    Rat brute = joint_bruteforce_moment_rat(f, coins, 2, false);
    CHECK(brute == Rat(5, 8));
    CHECK(exact_moment_rat(f, coins, 2) == brute);
    CHECK(joint_bruteforce_moment_rat(f, coins, 2, true) == Rat(3, 8));
    CHECK(exact_variance_rat(f, coins) == Rat(3, 8));

    RngStream rng(31, 0);
    PolyGenOptions opts;
    opts.edges_max = 4;
    for (int i = 0; i < 30; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_finite_dists(rng, poly.n());
        for (int k = 1; k <= 4; ++k) {
            CHECK(exact_moment_rat(poly, dists, k) == joint_bruteforce_moment_rat(poly, dists, k, false));
        }
        CHECK(exact_variance_rat(poly, dists) == joint_bruteforce_moment_rat(poly, dists, 2, true));
    }
}

TEST_CASE("central even moments") {
    auto rade2 = repeated(DistributionSpec::rademacher(), 2);
    CHECK(exact_central_even_moment_rat(pair_poly(2, 1, 2), rade2, 4) == Rat(1));

    MultilinearPolynomial constant(1);
    constant.add_term(Hyperedge(), Rat(3));
    CHECK(exact_central_even_moment_rat(constant, repeated(DistributionSpec::rademacher(), 1), 4) == Rat(0));

    CHECK_THROWS_AS(exact_central_even_moment_rat(pair_poly(2, 1, 2), rade2, 3), std::invalid_argument);

    RngStream rng(32, 0);
    PolyGenOptions opts;
    opts.edges_max = 4;
    for (int i = 0; i < 25; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_finite_dists(rng, poly.n());
        CHECK(exact_central_even_moment_rat(poly, dists, 2) == exact_variance_rat(poly, dists));
        CHECK(exact_central_even_moment_rat(poly, dists, 4) ==
              joint_bruteforce_moment_rat(poly, dists, 4, true));
    }

    // the binomial route E[(f-c)^k] = sum_j C(k,j) (-c)^{k-j} E[f^j] is an
    // independent identity on the same expansion
    for (int i = 0; i < 10; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_catalog_dists(rng, poly.n());
        Rat c = exact_mean_rat(poly, dists);
        Rat via_binomial(0);
        for (int j = 0; j <= 4; ++j) {
            Rat term = Rat(binomial(4, j)) * rat_pow(-c, 4 - j);
            via_binomial += term * (j == 0 ? Rat(1) : exact_moment_rat(poly, dists, j));
        }
        CHECK(exact_central_even_moment_rat(poly, dists, 4) == via_binomial);
    }
}

TEST_CASE("odd centered moments against a seeded sampling oracle") {
    // no exact |.|^k route for odd k; compare the signed third moment of the
    // joint enumeration with a 10^7-sample estimate at 5 standard errors
    MultilinearPolynomial f(3);
    f.add_term(Hyperedge::checked({1, 2}), Rat(1));
    f.add_term(Hyperedge::checked({2, 3}), Rat(1));
    auto coins = repeated(DistributionSpec::bernoulli(Rat(1, 2)), 3);
    double exact = to_double(joint_bruteforce_moment_rat(f, coins, 3, true));
    double c = exact_mean(f, coins);

    const long long n = 10000000;
    double sum = 0.0, sumsq = 0.0;
    for (long long i = 0; i < n; ++i) {
        RngStream s(77, static_cast<std::uint64_t>(i));
        double y1 = sample(coins[0], s), y2 = sample(coins[1], s), y3 = sample(coins[2], s);
        double dev = y1 * y2 + y2 * y3 - c;
        double v = dev * dev * dev;
        sum += v;
        sumsq += v * v;
    }
    double estimate = sum / n;
    double se = std::sqrt(std::max(0.0, sumsq / n - estimate * estimate) / n);
    CHECK(std::abs(estimate - exact) <= 5.0 * se);
}

TEST_CASE("covariance") {
    auto rade4 = repeated(DistributionSpec::rademacher(), 4);
    CHECK(covariance_rat(pair_poly(4, 1, 2), pair_poly(4, 3, 4), rade4) == Rat(0));
    CHECK(covariance_rat(pair_poly(4, 1, 2), pair_poly(4, 1, 2), rade4) == Rat(1));

    // shared vertex but distinct edges: the lone factors kill the term
    auto rade3 = repeated(DistributionSpec::rademacher(), 3);
    CHECK(covariance_rat(pair_poly(3, 1, 2), pair_poly(3, 1, 3), rade3) == Rat(0));
    // 16-outcome brute force of E[g1 g2] for the same pair
    Rat brute(0);
    for (int mask = 0; mask < 8; ++mask) {
        Rat x1 = (mask & 1) ? Rat(1) : Rat(-1);
        Rat x2 = (mask & 2) ? Rat(1) : Rat(-1);
        Rat x3 = (mask & 4) ? Rat(1) : Rat(-1);
        brute += Rat(1, 8) * (x1 * x2) * (x1 * x3);
    }
    CHECK(brute == Rat(0));

    // general means: expansion equals the joint enumeration of g1 * g2
    RngStream rng(33, 0);
    for (int i = 0; i < 20; ++i) {
        int n = 4;
        auto dists = random_finite_dists(rng, n);
        auto g1 = pair_poly(n, 1, 2);
        auto g2 = pair_poly(n, 2, 3);
        // (x1 x2)(x2 x3) carries x2^2, so check the expansion against a
        // direct joint enumeration of the product
        Rat expected(0);
        std::vector<std::vector<std::pair<Rat, Rat>>> pts(n);
        for (int v = 0; v < n; ++v) {
            switch (dists[v].kind) {
                case DistKind::Discrete:
                    pts[v] = dists[v].support;
                    break;
                case DistKind::Bernoulli:
                    pts[v] = {{Rat(0), Rat(1) - dists[v].p}, {Rat(1), dists[v].p}};
                    break;
                default:
                    pts[v] = {{Rat(-1), Rat(1, 2)}, {Rat(1), Rat(1, 2)}};
                    break;
            }
        }
        std::vector<std::size_t> idx(n, 0);
        while (true) {
            Rat prob(1);
            std::vector<Rat> y(n);
            for (int v = 0; v < n; ++v) {
                y[v] = pts[v][idx[v]].first;
                prob *= pts[v][idx[v]].second;
            }
            expected += prob * (y[0] * y[1]) * (y[1] * y[2]);
            std::size_t pos = 0;
            while (pos < idx.size() && ++idx[pos] == pts[pos].size()) {
                idx[pos] = 0;
                ++pos;
            }
            if (pos == idx.size()) break;
        }
        CHECK(covariance_rat(g1, g2, dists) == expected);
    }
}

TEST_CASE("caps are hard errors") {
    // 49 path edges at k = 6 blow the |H|^k cap
    MultilinearPolynomial big(50);
    for (int a = 1; a <= 49; ++a) big.add_term(Hyperedge::checked({a, a + 1}), Rat(1));
    auto dists = repeated(DistributionSpec::rademacher(), 50);
    CHECK_THROWS_AS(exact_moment_rat(big, dists, 6), CapExceeded);

    // joint enumeration rejects infinite supports
    auto pois = repeated(DistributionSpec::poisson(Rat(1)), 2);
    CHECK_THROWS_AS(joint_bruteforce_moment_rat(pair_poly(2, 1, 2), pois, 2, false), std::invalid_argument);

    // and too many outcomes: 3^16 > 10^7
    MultilinearPolynomial wide(16);
    wide.add_term(Hyperedge::checked({1, 16}), Rat(1));
    std::vector<DistributionSpec> three_point(
        16, DistributionSpec::discrete({{Rat(-1), Rat(1, 3)}, {Rat(0), Rat(1, 3)}, {Rat(1), Rat(1, 3)}}));
    CHECK_THROWS_AS(joint_bruteforce_moment_rat(wide, three_point, 2, false), CapExceeded);
}

TEST_CASE("k-norm triangle inequality on random centered pairs") {
    RngStream rng(35, 0);
    PolyGenOptions opts;
    // two edges of size <= 2 per part keeps the centered expansion of the
    // sum comfortably inside the k = 6 cap
    opts.edges_max = 2;
    opts.q_max = 2;
    for (int i = 0; i < 20; ++i) {
        int n = uniform_int(rng, 3, 6);
        opts.n_min = opts.n_max = n;
        auto f = random_polynomial(rng, opts);
        auto g = random_polynomial(rng, opts);
        auto dists = random_finite_dists(rng, n);
        MultilinearPolynomial sum(n);
        for (const auto& [e, w] : f.terms()) sum.add_term(e, w);
        for (const auto& [e, w] : g.terms()) sum.add_term(e, w);
        for (int k = 2; k <= 6; k += 2) {
            double lhs = std::pow(exact_central_even_moment(sum, dists, k), 1.0 / k);
            double rhs = std::pow(exact_central_even_moment(f, dists, k), 1.0 / k) +
                         std::pow(exact_central_even_moment(g, dists, k), 1.0 / k);
            CHECK(lhs <= rhs + 1e-9 * (1.0 + rhs));
        }
    }
}

TEST_CASE("float path stays within 1e-12 of the exact path") {
    RngStream rng(36, 0);
    PolyGenOptions opts;
    opts.edges_max = 4;
    for (int i = 0; i < 20; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_finite_dists(rng, poly.n());
        CHECK(rel_close(exact_variance(poly, dists), to_double(exact_variance_rat(poly, dists)), 1e-12));
        CHECK(rel_close(exact_moment(poly, dists, 3), to_double(exact_moment_rat(poly, dists, 3)), 1e-12));
        CHECK(rel_close(joint_bruteforce_moment(poly, dists, 2, true),
                        to_double(joint_bruteforce_moment_rat(poly, dists, 2, true)), 1e-12));
    }
}

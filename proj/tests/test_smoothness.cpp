#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polybound/gen.hpp"
#include "polybound/moments.hpp"
#include "polybound/rng.hpp"
#include "polybound/smoothness.hpp"
#include "test_util.hpp"

using namespace polybound;

namespace {

std::vector<DistributionSpec> repeated(const DistributionSpec& d, int n) {
    return std::vector<DistributionSpec>(n, d);
}

}  // namespace

TEST_CASE("mu on a single product edge of rademachers") {
    MultilinearPolynomial poly(2);
    poly.add_term(Hyperedge::checked({1, 2}), Rat(1));
    auto dists = repeated(DistributionSpec::rademacher(), 2);
    CHECK(mu(poly, dists, 0) == 1.0);
    CHECK(mu(poly, dists, 1) == 1.0);
    CHECK(mu(poly, dists, 2) == 1.0);
    CHECK_THROWS_AS(mu(poly, dists, 3), std::invalid_argument);
}

TEST_CASE("mu on disjoint pairs of coin variables") {
    // five vertex-disjoint pairs, weight 1, bernoulli(p):
    // mu_0 = 5 p^2, mu_1 = p, mu_2 = 1
    Rat p(1, 3);
    MultilinearPolynomial poly(10);
    for (int i = 0; i < 5; ++i) poly.add_term(Hyperedge::checked({2 * i + 1, 2 * i + 2}), Rat(1));
    auto dists = repeated(DistributionSpec::bernoulli(p), 10);
    CHECK(mu_rat(poly, dists, 0) == 5 * p * p);
    CHECK(mu_rat(poly, dists, 1) == p);
    CHECK(mu_rat(poly, dists, 2) == Rat(1));
    CHECK(mu_bruteforce_rat(poly, dists, 0) == 5 * p * p);
    CHECK(mu_bruteforce_rat(poly, dists, 1) == p);
    CHECK(mu_bruteforce_rat(poly, dists, 2) == Rat(1));
}

TEST_CASE("mu of an empty polynomial vanishes") {
    MultilinearPolynomial poly(4, 2);
    auto dists = repeated(DistributionSpec::rademacher(), 4);
    for (int r = 0; r <= 2; ++r) CHECK(mu(poly, dists, r) == 0.0);
}

TEST_CASE("mu_1 is attained on the shared vertex") {
    // f = x1 x2 + x1 x3 with E|Y| = 1: mu_1 = 2 at S = {1}
    MultilinearPolynomial poly(3);
    poly.add_term(Hyperedge::checked({1, 2}), Rat(1));
    poly.add_term(Hyperedge::checked({1, 3}), Rat(1));
    auto dists = repeated(DistributionSpec::rademacher(), 3);
    CHECK(mu_rat(poly, dists, 1) == Rat(2));
    CHECK(mu_bruteforce_rat(poly, dists, 1) == Rat(2));
}

TEST_CASE("brute-force guard rejects large n") {
    MultilinearPolynomial poly(21);
    poly.add_term(Hyperedge::checked({1}), Rat(1));
    auto dists = repeated(DistributionSpec::rademacher(), 21);
    CHECK_THROWS_AS(mu_bruteforce(poly, dists, 1), std::invalid_argument);
}

TEST_CASE("aggregated mu equals the subset brute force") {
    RngStream rng(21, 0);
    PolyGenOptions opts;
    opts.n_max = 10;
    for (int i = 0; i < 60; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_finite_dists(rng, poly.n());
        for (int r = 0; r <= poly.power(); ++r) {
            CHECK(mu_rat(poly, dists, r) == mu_bruteforce_rat(poly, dists, r));
        }
    }
    // float path with gaussians stays within 1e-12 relative
    for (int i = 0; i < 30; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_catalog_dists(rng, poly.n());
        for (int r = 0; r <= poly.power(); ++r) {
            CHECK(rel_close(mu(poly, dists, r), mu_bruteforce(poly, dists, r), 1e-12));
        }
    }
}

TEST_CASE("mu scales linearly and responds monotonically to new edges") {
    RngStream rng(22, 0);
    PolyGenOptions opts;
    for (int i = 0; i < 30; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_finite_dists(rng, poly.n());
        Rat c(uniform_int(rng, 1, 5), uniform_int(rng, 1, 3));
        MultilinearPolynomial scaled(poly.n());
        for (const auto& [e, w] : poly.terms()) scaled.add_term(e, c * w);
        for (int r = 0; r <= poly.power(); ++r) {
            CHECK(mu_rat(scaled, dists, r) == c * mu_rat(poly, dists, r));
        }

        // adding a new hyperedge with positive weight never decreases any mu_r
        MultilinearPolynomial grown(poly.n());
        for (const auto& [e, w] : poly.terms()) grown.add_term(e, w);
        for (int attempt = 0; attempt < 50; ++attempt) {
            std::vector<int> verts;
            int size = uniform_int(rng, 1, std::min(3, poly.n()));
            while (static_cast<int>(verts.size()) < size) {
                int v = uniform_int(rng, 1, poly.n());
                bool dup = false;
                for (int u : verts) dup = dup || u == v;
                if (!dup) verts.push_back(v);
            }
            auto edge = Hyperedge::checked(verts);
            if (poly.coefficient(edge) != 0) continue;  // must be genuinely new
            grown.add_term(edge, Rat(uniform_int(rng, 1, 3)));
            break;
        }
        for (int r = 0; r <= poly.power(); ++r) {
            CHECK(mu_rat(grown, dists, r) >= mu_rat(poly, dists, r));
        }
    }
}

TEST_CASE("profile assembles the bound inputs") {
    MultilinearPolynomial poly(2);
    poly.add_term(Hyperedge::checked({1, 2}), Rat(1));
    auto dists = repeated(DistributionSpec::bernoulli(Rat(1, 2)), 2);
    auto prof = profile(poly, dists);
    CHECK(prof.q == 2);
    CHECK(prof.mean == doctest::Approx(0.25));
    CHECK(prof.variance == doctest::Approx(3.0 / 16));
    CHECK(prof.L == doctest::Approx(0.5));
    CHECK(prof.mu[2] == doctest::Approx(1.0));

    // overrides replace the per-variable parameter and the max
    auto forced = profile(poly, dists, {std::optional<double>(4.0), std::nullopt});
    CHECK(forced.L == doctest::Approx(4.0));
    CHECK(forced.per_variable_L[0] == doctest::Approx(4.0));
    CHECK(forced.per_variable_L[1] == doctest::Approx(0.5));
}

TEST_CASE("profile JSON round trip") {
    MultilinearPolynomial poly(3);
    poly.add_term(Hyperedge::checked({1, 2}), Rat(1));
    poly.add_term(Hyperedge::checked({3}), Rat(1, 2));
    auto dists = repeated(DistributionSpec::gaussian(Rat(0), Rat(1)), 3);
    auto prof = profile(poly, dists);
    auto round = SmoothnessProfile::from_json(prof.to_json());
    CHECK(round.q == prof.q);
    CHECK(round.mu == prof.mu);
    CHECK(round.L == prof.L);
    CHECK(round.mean == prof.mean);
    CHECK(round.variance == prof.variance);
}

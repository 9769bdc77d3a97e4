#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "polybound/gen.hpp"
#include "polybound/io.hpp"
#include "polybound/moments.hpp"
#include "polybound/montecarlo.hpp"
#include "polybound/rng.hpp"
#include "test_util.hpp"

using namespace polybound;

namespace {

std::vector<DistributionSpec> repeated(const DistributionSpec& d, int n) {
    return std::vector<DistributionSpec>(n, d);
}

MultilinearPolynomial sign_pair() {
    MultilinearPolynomial poly(2);
    poly.add_term(Hyperedge::checked({1, 2}), Rat(1));
    return poly;
}

}  // namespace

TEST_CASE("wilson interval") {
    auto [low0, high0] = wilson_interval(0, 100, 0.95);
    CHECK(low0 == 0.0);
    CHECK(high0 > 0.0);
    auto [low1, high1] = wilson_interval(100, 100, 0.95);
    CHECK(high1 == 1.0);
    CHECK(low1 < 1.0);

    // the closed form at 50/100 and 95%: centered on 1/2, width about 0.19
    auto [low, high] = wilson_interval(50, 100, 0.95);
    CHECK(low + high == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(high - low == doctest::Approx(0.1923).epsilon(2e-3));
    CHECK(low < 0.5);
    CHECK(high > 0.5);

    // mirror symmetry: interval of (h, n) reflects the interval of (n-h, n)
    for (long long h : {3LL, 17LL, 42LL}) {
        auto [l1, h1] = wilson_interval(h, 100, 0.99);
        auto [l2, h2] = wilson_interval(100 - h, 100, 0.99);
        CHECK(l1 == doctest::Approx(1.0 - h2).epsilon(1e-12));
        CHECK(h1 == doctest::Approx(1.0 - l2).epsilon(1e-12));
    }

    CHECK_THROWS_AS(wilson_interval(5, 0, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(wilson_interval(5, 4, 0.95), std::invalid_argument);
}

TEST_CASE("normal quantile sanity") {
    CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
    CHECK(inverse_normal_cdf(0.995) == doctest::Approx(2.575829).epsilon(1e-6));
    CHECK(inverse_normal_cdf(0.025) == doctest::Approx(-1.959964).epsilon(1e-6));
}

TEST_CASE("empirical tail boundary conventions") {
    auto poly = sign_pair();
    auto dists = repeated(DistributionSpec::rademacher(), 2);

    // lambda = 0 is always hit, even by a constant polynomial
    auto at_zero = empirical_tail(poly, dists, {0.0}, 1000, 42);
    CHECK(at_zero[0].estimate == 1.0);

    MultilinearPolynomial constant(1);
    constant.add_term(Hyperedge(), Rat(5));
    auto const_dists = repeated(DistributionSpec::rademacher(), 1);
    auto rows = empirical_tail(constant, const_dists, {0.0, 0.5}, 1000, 42);
    CHECK(rows[0].estimate == 1.0);
    CHECK(rows[1].estimate == 0.0);
    CHECK(rows[1].ci_low == 0.0);

    // |x1 x2| = 1 always: the estimate at lambda = 0.5 is exactly 1
    auto half = empirical_tail(poly, dists, {0.5}, 100000, 7);
    CHECK(half[0].estimate == 1.0);
    CHECK(half[0].ci_low > 0.999);
}

TEST_CASE("hit counts are invariant under the worker count") {
    RngStream rng(61, 0);
    PolyGenOptions opts;
    for (int i = 0; i < 5; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_catalog_dists(rng, poly.n());
        auto grid = default_lambda_grid(exact_variance(poly, dists));
        auto one = empirical_tail(poly, dists, grid, 40000, 99 + i, 0.99, 1);
        auto two = empirical_tail(poly, dists, grid, 40000, 99 + i, 0.99, 2);
        auto eight = empirical_tail(poly, dists, grid, 40000, 99 + i, 0.99, 8);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            CHECK(one[j].hits == two[j].hits);
            CHECK(one[j].hits == eight[j].hits);
        }
    }
}

TEST_CASE("estimates are nonincreasing in lambda within a run") {
    RngStream rng(62, 0);
    PolyGenOptions opts;
    for (int i = 0; i < 5; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_catalog_dists(rng, poly.n());
        auto grid = default_lambda_grid(exact_variance(poly, dists));
        auto rows = empirical_tail(poly, dists, grid, 20000, 1234 + i);
        for (std::size_t j = 1; j < rows.size(); ++j) {
            CHECK(rows[j].hits <= rows[j - 1].hits);
        }
    }
}

TEST_CASE("interval coverage calibration on exact binomial tails") {
    // f = x1 + ... + x6 of fair coins: the deviation tail is exactly
    // computable from the binomial distribution
    const int n_vars = 6;
    MultilinearPolynomial poly(n_vars);
    for (int v = 1; v <= n_vars; ++v) poly.add_term(Hyperedge::checked({v}), Rat(1));
    auto dists = repeated(DistributionSpec::bernoulli(Rat(1, 2)), n_vars);

    const std::vector<double> lambdas = {0.6, 1.6, 2.6};
    std::vector<double> truth(lambdas.size(), 0.0);
    for (int count = 0; count <= n_vars; ++count) {
        double pmf = to_double(Rat(binomial(n_vars, count), BigInt(1) << n_vars));
        for (std::size_t j = 0; j < lambdas.size(); ++j) {
            if (std::abs(count - 3.0) >= lambdas[j]) truth[j] += pmf;
        }
    }

    const int replications = 1000;
    const long long samples = 2000;
    int covered = 0, total = 0;
    for (int rep = 0; rep < replications; ++rep) {
        auto rows = empirical_tail(poly, dists, lambdas, samples, 100000 + rep, 0.99);
        for (std::size_t j = 0; j < lambdas.size(); ++j) {
            ++total;
            if (rows[j].ci_low <= truth[j] && truth[j] <= rows[j].ci_high) ++covered;
        }
    }
    CHECK(static_cast<double>(covered) / total >= 0.97);
}

TEST_CASE("comparison table flags planted violations") {
    auto poly = sign_pair();
    auto dists = repeated(DistributionSpec::rademacher(), 2);
    auto prof = profile(poly, dists);
    CompareOptions options;
    options.samples = 20000;
    options.seed = 4242;

    BoundConstants sane;
    sane.R = 3.0;
    sane.R_hc = 3.0;
    auto rows = compare(poly, dists, prof, {0.5, 1.0, 2.0}, sane, options);
    for (const auto& row : rows) CHECK_FALSE(row.violation);
    CHECK(rows[0].hc_valid);

    BoundConstants absurd;
    absurd.R = 0.01;
    rows = compare(poly, dists, prof, {0.5, 1.0, 2.0}, absurd, options);
    bool any = false;
    for (const auto& row : rows) any = any || row.violation;
    CHECK(any);

    // sampling disabled: bounds only, no empirical payload
    options.samples = 0;
    rows = compare(poly, dists, prof, {0.5, 1.0}, sane, options);
    for (const auto& row : rows) {
        CHECK_FALSE(row.empirical.has_value());
        CHECK_FALSE(row.violation);
    }
}

TEST_CASE("report serialization") {
    auto poly = sign_pair();
    auto dists = repeated(DistributionSpec::rademacher(), 2);
    auto prof = profile(poly, dists);
    CompareOptions options;
    options.samples = 1000;
    BoundConstants c;
    c.R = 3.0;
    auto rows = compare(poly, dists, prof, {0.25, 0.75, 1.5}, c, options);

    auto csv = report_csv(rows);
    CHECK(csv.find("lambda,main_raw,main_clamped,ss_clamped,hc_clamped,bernstein_var,estimate,ci_low,ci_high,"
                   "violation_flag") == 0);
    // rows sorted by lambda with dot decimals
    auto p1 = csv.find("\n0.25,");
    auto p2 = csv.find("\n0.75,");
    auto p3 = csv.find("\n1.5,");
    CHECK(p1 != std::string::npos);
    CHECK(p2 != std::string::npos);
    CHECK(p3 != std::string::npos);
    CHECK(p1 < p2);
    CHECK(p2 < p3);
    CHECK(csv.find(',') != std::string::npos);

    options.samples = 0;
    auto bounds_only = report_csv(compare(poly, dists, prof, {0.25}, c, options));
    CHECK(bounds_only.find("estimate") == std::string::npos);

    auto j = report_json(rows);
    CHECK(j.is_array());
    CHECK(j.size() == 3);
    CHECK(j[0].contains("estimate"));
    CHECK(j[0]["lambda"].get<double>() == doctest::Approx(0.25));
}

TEST_CASE("default grid spans a tenth to five sigmas") {
    auto grid = default_lambda_grid(4.0);  // sigma = 2
    REQUIRE(grid.size() == 10);
    CHECK(grid.front() == doctest::Approx(0.2));
    CHECK(grid.back() == doctest::Approx(10.0));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

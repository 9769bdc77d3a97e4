#include "polybound/selfcheck.hpp"

#include <cmath>
#include <sstream>

#include "polybound/bounds.hpp"
#include "polybound/gen.hpp"
#include "polybound/moments.hpp"
#include "polybound/smoothness.hpp"

namespace polybound {

namespace {

std::string counts(int pass, int total) {
    std::ostringstream out;
    out << pass << "/" << total;
    return out.str();
}

CheckResult check_variance_identity(std::uint64_t seed) {
    RngStream rng(seed, 1);
    PolyGenOptions opts;
    int total = 200, ok = 0;
    for (int i = 0; i < total; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_finite_dists(rng, poly.n());
        if (exact_variance_rat(poly, dists) == joint_bruteforce_moment_rat(poly, dists, 2, true)) ++ok;
    }
    return {"variance-identity", ok == total, counts(ok, total) + " instances agree exactly"};
}

// Two polynomials over the same variables with no shared hyperedge.
std::pair<MultilinearPolynomial, MultilinearPolynomial> disjoint_support_pair(RngStream& rng, int n) {
    MultilinearPolynomial g1(n), g2(n);
    auto random_edge = [&] {
        std::vector<int> verts;
        int size = uniform_int(rng, 1, std::min(3, n));
        while (static_cast<int>(verts.size()) < size) {
            int v = uniform_int(rng, 1, n);
            bool dup = false;
            for (int u : verts) dup = dup || u == v;
            if (!dup) verts.push_back(v);
        }
        return Hyperedge::checked(verts);
    };
    int edges1 = uniform_int(rng, 1, 3), edges2 = uniform_int(rng, 1, 3);
    for (int e = 0; e < edges1; ++e) g1.add_term(random_edge(), Rat(uniform_int(rng, 1, 3)));
    for (int e = 0; e < edges2; ++e) {
        auto edge = random_edge();
        if (g1.coefficient(edge) != 0) continue;  // keep the supports disjoint
        g2.add_term(edge, Rat(uniform_int(rng, 1, 3)));
    }
    if (g2.term_count() == 0) {
        // some singleton is always free: g1 has at most 3 edges and n >= 4
        for (int v = 1; v <= n; ++v) {
            auto edge = Hyperedge::checked({v});
            if (g1.coefficient(edge) == 0) {
                g2.add_term(edge, Rat(1));
                break;
            }
        }
    }
    return {std::move(g1), std::move(g2)};
}

CheckResult check_orthogonality(std::uint64_t seed) {
    RngStream rng(seed, 2);
    int total = 50, ok = 0;
    for (int i = 0; i < total; ++i) {
        int n = uniform_int(rng, 4, 8);
        auto dists = random_zero_mean_dists(rng, n);
        auto [g1, g2] = disjoint_support_pair(rng, n);
        if (covariance_rat(g1, g2, dists) == 0) ++ok;
    }
    return {"orthogonality", ok == total, counts(ok, total) + " disjoint centered pairs with zero covariance"};
}

CheckResult check_centering_identity(std::uint64_t seed) {
    RngStream rng(seed, 3);
    PolyGenOptions opts;
    int instances = 30, points = 100, bad = 0;
    for (int i = 0; i < instances; ++i) {
        auto poly = random_polynomial(rng, opts);
        std::vector<Rat> means(poly.n());
        std::vector<double> means_d(poly.n());
        for (int v = 0; v < poly.n(); ++v) {
            means_d[v] = uniform_real(rng, -2.0, 2.0);
            means[v] = rat_from_double(means_d[v]);
        }
        auto centered = center(poly, means);
        for (int p = 0; p < points; ++p) {
            std::vector<double> x(poly.n()), shifted(poly.n());
            for (int v = 0; v < poly.n(); ++v) {
                x[v] = uniform_real(rng, -2.0, 2.0);
                shifted[v] = x[v] - means_d[v];
            }
            double direct = evaluate(poly, x);
            double via_centered = evaluate(centered, shifted);
            if (std::abs(via_centered - direct) > 1e-9 * (1.0 + std::abs(direct))) ++bad;
        }
    }
    return {"centering-identity", bad == 0,
            std::to_string(instances) + " instances x " + std::to_string(points) + " points, " +
                std::to_string(bad) + " mismatches"};
}

CheckResult check_split_reconstruction(std::uint64_t seed) {
    RngStream rng(seed, 4);
    PolyGenOptions opts;
    opts.allow_constant_term = true;
    int total = 50, ok = 0;
    for (int i = 0; i < total; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto parts = split_by_sign_and_size(poly);
        bool good = true;
        for (const auto& part : parts) {
            for (const auto& [edge, w] : part.part.terms()) {
                if (edge.size() != part.size || (w > 0 ? 1 : -1) != part.sign) good = false;
            }
        }
        for (int p = 0; p < 20 && good; ++p) {
            std::vector<double> x(poly.n());
            for (int v = 0; v < poly.n(); ++v) x[v] = uniform_real(rng, -2.0, 2.0);
            double sum = to_double(poly.coefficient(Hyperedge()));
            for (const auto& part : parts) sum += evaluate(part.part, x);
            double direct = evaluate(poly, x);
            if (std::abs(sum - direct) > 1e-9 * (1.0 + std::abs(direct))) good = false;
        }
        if (good) ++ok;
    }
    return {"sign-size-split", ok == total, counts(ok, total) + " partitions reconstruct the input"};
}

CheckResult check_minkowski(std::uint64_t seed) {
    RngStream rng(seed, 5);
    PolyGenOptions opts;
    // small parts keep the centered expansion of the sum inside the caps
    opts.edges_max = 2;
    opts.q_max = 2;
    int total = 30, ok = 0;
    for (int i = 0; i < total; ++i) {
        int n = uniform_int(rng, 3, 6);
        opts.n_min = opts.n_max = n;
        auto f = random_polynomial(rng, opts);
        auto g = random_polynomial(rng, opts);
        auto dists = random_finite_dists(rng, n);
        MultilinearPolynomial sum(n);
        for (const auto& [e, w] : f.terms()) sum.add_term(e, w);
        for (const auto& [e, w] : g.terms()) sum.add_term(e, w);
        bool good = true;
        for (int k = 2; k <= 6; k += 2) {
            double lhs = std::pow(exact_central_even_moment(sum, dists, k), 1.0 / k);
            double rhs = std::pow(exact_central_even_moment(f, dists, k), 1.0 / k) +
                         std::pow(exact_central_even_moment(g, dists, k), 1.0 / k);
            if (lhs > rhs + 1e-9 * (1.0 + rhs)) good = false;
        }
        if (good) ++ok;
    }
    return {"moment-triangle-inequality", ok == total, counts(ok, total) + " pairs satisfy the k-norm triangle bound"};
}

CheckResult check_variance_additivity(std::uint64_t seed) {
    RngStream rng(seed, 6);
    PolyGenOptions opts;
    int total = 50, ok = 0;
    for (int i = 0; i < total; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_finite_dists(rng, poly.n());
        auto centered = center(poly, means_rat(dists));
        auto parts = split_by_sign_and_size(centered);
        std::vector<Rat> second_central(dists.size());
        for (std::size_t v = 0; v < dists.size(); ++v) {
            Rat m = mean_rat(dists[v]);
            second_central[v] = raw_moment_rat(dists[v], 2) - m * m;
        }
        Rat total_var(0);
        for (const auto& part : parts) {
            for (const auto& [edge, w] : part.part.terms()) {
                Rat term = w * w;
                for (int v : edge.vertices()) term *= second_central[v - 1];
                total_var += term;
            }
        }
        if (total_var == exact_variance_rat(poly, dists)) ++ok;
    }
    return {"variance-additivity", ok == total, counts(ok, total) + " split variances sum to the total"};
}

CheckResult check_mu_oracle(std::uint64_t seed) {
    RngStream rng(seed, 7);
    PolyGenOptions opts;
    opts.n_max = 10;
    int total = 0, ok = 0;
    for (int i = 0; i < 200; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_finite_dists(rng, poly.n());
        for (int r = 0; r <= poly.power(); ++r) {
            ++total;
            if (mu_rat(poly, dists, r) == mu_bruteforce_rat(poly, dists, r)) ++ok;
        }
    }
    return {"mu-subset-oracle", ok == total, counts(ok, total) + " (instance, r) pairs agree exactly"};
}

CheckResult check_variance_comparison(std::uint64_t seed) {
    RngStream rng(seed, 8);
    PolyGenOptions opts;
    int total = 100, ok = 0;
    for (int i = 0; i < total; ++i) {
        auto poly = random_polynomial(rng, opts);
        auto dists = random_catalog_dists(rng, poly.n());
        auto prof = profile(poly, dists);
        if (varbound_check(prof).holds) ++ok;
    }
    return {"variance-comparison", ok == total, counts(ok, total) + " instances satisfy the variance upper bound"};
}

CheckResult check_even_moment_bound(std::uint64_t seed) {
    // fit on one generated corpus, verify on a disjoint one
    PolyGenOptions opts;
    opts.edges_max = 5;
    auto build = [&](std::uint64_t stream, int count) {
        RngStream rng(seed, stream);
        std::vector<MomentFitCase> cases;
        for (int i = 0; i < count; ++i) {
            auto poly = random_polynomial(rng, opts);
            auto dists = random_finite_dists(rng, poly.n());
            MomentFitCase c;
            c.profile = profile(poly, dists);
            for (int k = 2; k <= 6; k += 2) {
                c.central_even_moments.emplace_back(k, exact_central_even_moment(poly, dists, k));
            }
            cases.push_back(std::move(c));
        }
        return cases;
    };
    auto fit_cases = build(9, 40);
    double r4 = fit_R4(fit_cases);
    auto holdout = build(10, 40);
    BoundConstants constants;
    constants.R4 = r4;
    int violations = 0;
    for (const auto& c : holdout) {
        for (const auto& [k, moment] : c.central_even_moments) {
            if (moment > even_moment_bound(k, c.profile, constants)) ++violations;
        }
    }
    std::ostringstream detail;
    detail << "fitted R4=" << r4 << ", " << violations << " holdout violations";
    return {"even-moment-bound", violations == 0, detail.str()};
}

CheckResult check_cmb_catalog(std::uint64_t) {
    int total = 0, ok = 0;
    double worst = 0.0;
    std::string worst_name;
    for (const auto& dist : standard_catalog()) {
        ++total;
        double L = cmb_parameter(dist);
        auto report = verify_cmb(dist, L, 20, 1e-9);
        if (report.pass) ++ok;
        if (report.worst_ratio > worst) {
            worst = report.worst_ratio;
            worst_name = dist.describe();
        }
    }
    std::ostringstream detail;
    detail << counts(ok, total) << " laws certified; worst ratio " << worst << " (" << worst_name << ")";
    return {"central-moment-boundedness", ok == total, detail.str()};
}

CheckResult check_cmb_bernoulli_formula(std::uint64_t) {
    int total = 0, ok = 0;
    for (int num = 1; num <= 9; ++num) {
        ++total;
        Rat p(num, 10);
        auto dist = DistributionSpec::bernoulli(p);
        double expected = std::max(to_double(p), 1.0 - to_double(p));
        double L = cmb_parameter(dist);
        if (std::abs(L - expected) <= 1e-15 && verify_cmb(dist, L, 20, 1e-9).pass) ++ok;
    }
    return {"bernoulli-bound-parameter", ok == total, counts(ok, total) + " parameters equal max(p, 1-p)"};
}

CheckResult check_ordering(std::uint64_t seed) {
    RngStream rng(seed, 11);
    int total = 500, ok = 0;
    for (int i = 0; i < total; ++i) {
        auto g = random_mindeg2_hypergraph(rng, 8, 3);
        auto co = canonical_orderings(g);
        if (verify_ordering(g, co)) ++ok;
    }
    return {"canonical-ordering", ok == total, counts(ok, total) + " random hypergraphs verified"};
}

CheckResult check_counting(std::uint64_t) {
    auto sweep = counting_sweep(8);
    long long mismatches = 0;
    double max_r0 = 0.0;
    for (const auto& entry : sweep) {
        if (entry.count != enumerate_labeled_backtracking(entry.c)) ++mismatches;
        max_r0 = std::max(max_r0, entry.min_r0);
    }
    std::ostringstream detail;
    detail << sweep.size() << " cases, " << mismatches << " enumerator mismatches, max min-r0 " << max_r0;
    return {"counting-bound", mismatches == 0, detail.str()};
}

}  // namespace

bool known_suite(const std::string& name) {
    return name == "moments" || name == "cmb" || name == "ordering" || name == "counting" || name == "all";
}

std::vector<CheckResult> run_suite(const std::string& name, std::uint64_t seed) {
    std::vector<CheckResult> results;
    if (name == "moments" || name == "all") {
        results.push_back(check_variance_identity(seed));
        results.push_back(check_orthogonality(seed));
        results.push_back(check_centering_identity(seed));
        results.push_back(check_split_reconstruction(seed));
        results.push_back(check_variance_additivity(seed));
        results.push_back(check_minkowski(seed));
        results.push_back(check_mu_oracle(seed));
        results.push_back(check_variance_comparison(seed));
        results.push_back(check_even_moment_bound(seed));
    }
    if (name == "cmb" || name == "all") {
        results.push_back(check_cmb_catalog(seed));
        results.push_back(check_cmb_bernoulli_formula(seed));
    }
    if (name == "ordering" || name == "all") {
        results.push_back(check_ordering(seed));
    }
    if (name == "counting" || name == "all") {
        results.push_back(check_counting(seed));
    }
    return results;
}

}  // namespace polybound

#include "polybound/gen.hpp"

#include <algorithm>
#include <set>

namespace polybound {

namespace {

Rat random_weight(RngStream& rng, bool allow_negative) {
    static const int numerators[] = {1, 1, 1, 2, 2, 3, 3, 5};
    static const int denominators[] = {1, 2, 3, 1, 3, 1, 2, 4};
    int pick = uniform_int(rng, 0, 7);
    Rat w(numerators[pick], denominators[pick]);
    if (allow_negative && uniform_int(rng, 0, 1) == 1) w = -w;
    return w;
}

std::vector<int> random_subset(RngStream& rng, int n, int size) {
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < size) chosen.insert(uniform_int(rng, 1, n));
    return std::vector<int>(chosen.begin(), chosen.end());
}

Rat random_prob(RngStream& rng) {
    // strictly inside (0,1) on a coarse rational lattice
    return Rat(uniform_int(rng, 1, 9), 10);
}

}  // namespace

MultilinearPolynomial random_polynomial(RngStream& rng, const PolyGenOptions& options) {
    int n = uniform_int(rng, options.n_min, options.n_max);
    int q = uniform_int(rng, options.q_min, std::min(options.q_max, n));
    int edge_count = uniform_int(rng, options.edges_min, options.edges_max);
    MultilinearPolynomial poly(n);
    for (int e = 0; e < edge_count; ++e) {
        int size = uniform_int(rng, 1, q);
        poly.add_term(Hyperedge::checked(random_subset(rng, n, size)), random_weight(rng, options.allow_negative));
    }
    if (options.allow_constant_term && uniform_int(rng, 0, 3) == 0) {
        poly.add_term(Hyperedge(), random_weight(rng, options.allow_negative));
    }
    return poly;
}

std::vector<DistributionSpec> random_finite_dists(RngStream& rng, int n) {
    std::vector<DistributionSpec> dists;
    dists.reserve(n);
    for (int v = 0; v < n; ++v) {
        switch (uniform_int(rng, 0, 2)) {
            case 0:
                dists.push_back(DistributionSpec::bernoulli(random_prob(rng)));
                break;
            case 1:
                dists.push_back(DistributionSpec::rademacher());
                break;
            default: {
                // three-point law on small rationals
                Rat p1 = Rat(uniform_int(rng, 1, 4), 10);
                Rat p2 = Rat(uniform_int(rng, 1, 4), 10);
                Rat p3 = Rat(1) - p1 - p2;
                int x1 = uniform_int(rng, -2, 0);
                int x2 = x1 + uniform_int(rng, 1, 2);
                int x3 = x2 + uniform_int(rng, 1, 2);
                dists.push_back(DistributionSpec::discrete({{Rat(x1), p1}, {Rat(x2), p2}, {Rat(x3), p3}}));
                break;
            }
        }
    }
    return dists;
}

std::vector<DistributionSpec> random_zero_mean_dists(RngStream& rng, int n) {
    std::vector<DistributionSpec> dists;
    dists.reserve(n);
    for (int v = 0; v < n; ++v) {
        switch (uniform_int(rng, 0, 2)) {
            case 0:
                dists.push_back(DistributionSpec::rademacher());
                break;
            case 1: {
                // symmetric three-point law: mean is exactly zero
                Rat p = Rat(uniform_int(rng, 1, 4), 10);
                int a = uniform_int(rng, 1, 3);
                dists.push_back(
                    DistributionSpec::discrete({{Rat(-a), p}, {Rat(0), Rat(1) - 2 * p}, {Rat(a), p}}));
                break;
            }
            default:
                dists.push_back(DistributionSpec::gaussian(Rat(0), Rat(uniform_int(rng, 1, 2))));
                break;
        }
    }
    return dists;
}

std::vector<DistributionSpec> random_catalog_dists(RngStream& rng, int n) {
    std::vector<DistributionSpec> dists;
    dists.reserve(n);
    for (int v = 0; v < n; ++v) {
        switch (uniform_int(rng, 0, 7)) {
            case 0:
                dists.push_back(DistributionSpec::bernoulli(random_prob(rng)));
                break;
            case 1:
                dists.push_back(DistributionSpec::rademacher());
                break;
            case 2: {
                int a = uniform_int(rng, -2, 1);
                dists.push_back(DistributionSpec::uniform(Rat(a), Rat(a + uniform_int(rng, 1, 3))));
                break;
            }
            case 3:
                dists.push_back(
                    DistributionSpec::gaussian(Rat(uniform_int(rng, -1, 1)), Rat(uniform_int(rng, 1, 2))));
                break;
            case 4:
                dists.push_back(DistributionSpec::exponential(Rat(uniform_int(rng, 1, 3))));
                break;
            case 5:
                dists.push_back(DistributionSpec::poisson(Rat(uniform_int(rng, 1, 6), 2)));
                break;
            case 6:
                dists.push_back(DistributionSpec::geometric(random_prob(rng)));
                break;
            default: {
                Rat p1 = Rat(uniform_int(rng, 1, 4), 10);
                Rat p2 = Rat(1) - p1;
                int x = uniform_int(rng, -2, 1);
                dists.push_back(DistributionSpec::discrete({{Rat(x), p1}, {Rat(x + uniform_int(rng, 1, 3)), p2}}));
                break;
            }
        }
    }
    return dists;
}

std::vector<DistributionSpec> random_unit_interval_dists(RngStream& rng, int n) {
    std::vector<DistributionSpec> dists;
    dists.reserve(n);
    for (int v = 0; v < n; ++v) {
        switch (uniform_int(rng, 0, 2)) {
            case 0:
                dists.push_back(DistributionSpec::bernoulli(random_prob(rng)));
                break;
            case 1:
                dists.push_back(DistributionSpec::uniform(Rat(0), Rat(1)));
                break;
            default: {
                Rat p1 = Rat(uniform_int(rng, 1, 4), 10);
                Rat p2 = Rat(uniform_int(rng, 1, 4), 10);
                dists.push_back(DistributionSpec::discrete(
                    {{Rat(0), p1}, {Rat(1, 2), p2}, {Rat(1), Rat(1) - p1 - p2}}));
                break;
            }
        }
    }
    return dists;
}

LabeledHypergraph random_mindeg2_hypergraph(RngStream& rng, int k_max, int q_max) {
    int q = uniform_int(rng, 1, q_max);
    int k = uniform_int(rng, 2, k_max);
    // vertex pool small enough that degree-2 coverage is likely
    int max_l = std::max(q, (k * q) / 2);
    int l = uniform_int(rng, q, std::max(q, max_l));

    for (int attempt = 0; attempt < 200; ++attempt) {
        LabeledHypergraph g;
        g.vertex_count = l;
        std::set<int> used;
        for (int e = 0; e < k; ++e) {
            auto edge = random_subset(rng, l, q);
            used.insert(edge.begin(), edge.end());
            g.edges.push_back(std::move(edge));
        }
        if (static_cast<int>(used.size()) != l) continue;  // uncovered vertex
        if (g.min_degree() >= 2) return g;
    }

    // fallback: k copies of one edge cover their vertices with degree k >= 2
    LabeledHypergraph g;
    g.vertex_count = q;
    std::vector<int> edge(q);
    for (int i = 0; i < q; ++i) edge[i] = i + 1;
    for (int e = 0; e < k; ++e) g.edges.push_back(edge);
    return g;
}

std::vector<DistributionSpec> standard_catalog() {
    return {
        DistributionSpec::bernoulli(Rat(3, 10)),
        DistributionSpec::bernoulli(Rat(1, 2)),
        DistributionSpec::rademacher(),
        DistributionSpec::uniform(Rat(0), Rat(1)),
        DistributionSpec::uniform(Rat(-2), Rat(3)),
        DistributionSpec::gaussian(Rat(0), Rat(1)),
        DistributionSpec::gaussian(Rat(3, 2), Rat(7, 10)),
        DistributionSpec::exponential(Rat(1)),
        DistributionSpec::exponential(Rat(5, 2)),
        DistributionSpec::poisson(Rat(1, 2)),
        DistributionSpec::poisson(Rat(1)),
        DistributionSpec::poisson(Rat(3)),
        DistributionSpec::geometric(Rat(1, 5)),
        DistributionSpec::geometric(Rat(1, 2)),
        DistributionSpec::geometric(Rat(4, 5)),
        DistributionSpec::discrete({{Rat(-1), Rat(1, 4)}, {Rat(0), Rat(1, 2)}, {Rat(2), Rat(1, 4)}}),
    };
}

}  // namespace polybound

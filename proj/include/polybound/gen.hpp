#pragma once

#include <vector>

#include "polybound/combinatorics.hpp"
#include "polybound/distributions.hpp"
#include "polybound/model.hpp"
#include "polybound/rng.hpp"

namespace polybound {

// Seeded generators for the property suites. Everything is a pure function
// of the stream, so suites are reproducible across runs and platforms.

struct PolyGenOptions {
    int n_min = 2, n_max = 8;
    int q_min = 1, q_max = 3;
    int edges_min = 1, edges_max = 6;
    bool allow_negative = true;
    bool allow_constant_term = false;
};

// Random polynomial with small rational weights (halves and thirds of small
// integers).
MultilinearPolynomial random_polynomial(RngStream& rng, const PolyGenOptions& options);

// Finite-support laws only (discrete / bernoulli / rademacher) with rational
// parameters; joint enumeration stays exact.
std::vector<DistributionSpec> random_finite_dists(RngStream& rng, int n);

// Zero-mean laws with exact rational moments (rademacher, symmetric
// three-point, centered gaussian).
std::vector<DistributionSpec> random_zero_mean_dists(RngStream& rng, int n);

// Any catalog kind.
std::vector<DistributionSpec> random_catalog_dists(RngStream& rng, int n);

// Laws supported on [0,1] for the linear-case comparison.
std::vector<DistributionSpec> random_unit_interval_dists(RngStream& rng, int n);

// Random hypergraph with minimum vertex degree 2 (rejection sampling with a
// doubled-edges fallback); k <= k_max edges of one cardinality <= q_max.
LabeledHypergraph random_mindeg2_hypergraph(RngStream& rng, int k_max, int q_max);

// Distributions used by the boundedness checks: the criterion catalog.
std::vector<DistributionSpec> standard_catalog();

}  // namespace polybound

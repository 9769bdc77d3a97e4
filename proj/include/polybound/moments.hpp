#pragma once

#include <vector>

#include "polybound/distributions.hpp"
#include "polybound/model.hpp"
#include "polybound/rational.hpp"

namespace polybound {

// Exact moment oracles. Every inequality in the bounds module is tested
// against these. Two independent routes are kept: expansion over edge
// tuples and joint enumeration of finite supports; each validates the other.

// Term-count caps. Exceeding one is a hard error, never silent truncation.
inline constexpr double kExpansionCap = 1e7;  // |H|^k
inline constexpr double kJointCap = 1e7;      // product of support sizes

Rat exact_mean_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists);
double exact_mean(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists);

// Var[f(Y)]: center at the means, drop the constant, then sum
// w'^2 * prod E[(Y_v - EY_v)^2] over the centered edges.
Rat exact_variance_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists);
double exact_variance(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists);

// E[f(Y)^k] by expansion over k-tuples of edges: each tuple contributes the
// product of its weights times prod_v E[Y_v^{d_v}] with d_v the multiplicity
// of v across the tuple.
Rat exact_moment_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int k);
double exact_moment(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int k);

// E[(f - Ef)^k] for even k: the expansion applied to the centered polynomial
// with its constant term removed. Rejects odd k.
Rat exact_central_even_moment_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                                  int k);
double exact_central_even_moment(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                                 int k);

// Independent oracle: enumerate every joint outcome of finite supports and
// sum probability-weighted (f(y) - c)^k, c = E[f(Y)] when centered.
Rat joint_bruteforce_moment_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                                int k, bool centered);
double joint_bruteforce_moment(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                               int k, bool centered);

// E[g1(Y) g2(Y)] over edge pairs; exactly zero when the polynomials share no
// hyperedge and all variable means vanish.
Rat covariance_rat(const MultilinearPolynomial& g1, const MultilinearPolynomial& g2,
                   const std::vector<DistributionSpec>& dists);
double covariance(const MultilinearPolynomial& g1, const MultilinearPolynomial& g2,
                  const std::vector<DistributionSpec>& dists);

std::vector<Rat> means_rat(const std::vector<DistributionSpec>& dists);

}  // namespace polybound

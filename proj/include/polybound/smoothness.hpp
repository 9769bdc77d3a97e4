#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "polybound/distributions.hpp"
#include "polybound/model.hpp"

namespace polybound {

// mu[r] = max over vertex sets S of size r of
//   sum_{h containing S} |w_h| * prod_{v in h \ S} E|Y_v|,
// the smoothness inputs of the tail and moment bounds.
struct SmoothnessProfile {
    int q = 0;
    std::vector<double> mu;  // indexed r = 0..q
    double L = 0.0;          // max over the variables' parameters
    double mean = 0.0;
    double variance = 0.0;
    std::vector<double> per_variable_L;  // diagnostics

    nlohmann::json to_json() const;  // the five-field wire format
    static SmoothnessProfile from_json(const nlohmann::json& j);
};

// Aggregates, per hyperedge, the contributions to each of its size-r subsets
// and takes the max; subsets outside every edge contribute nothing.
double mu(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int r);
// Exact path; usable when every variable has a rational E|Y| (all catalog
// kinds except gaussian).
Rat mu_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int r);

// Literal max over all C(n,r) subsets of [n]; the oracle for mu. Guarded to
// n <= 20.
double mu_bruteforce(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int r);
Rat mu_bruteforce_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int r);

// Full per-instance profile. l_overrides supplies L for variables the
// automatic classification cannot handle (or to force a value); entries may
// be disengaged.
SmoothnessProfile profile(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                          const std::vector<std::optional<double>>& l_overrides = {});

}  // namespace polybound

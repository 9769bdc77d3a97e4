#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polybound/bounds.hpp"
#include "polybound/distributions.hpp"
#include "polybound/model.hpp"

namespace polybound {

// Empirical counterpart of Pr[|f(Y) - E f(Y)| >= lambda].
struct TailEstimate {
    double lambda = 0.0;
    long long samples = 0;
    long long hits = 0;
    double estimate = 0.0;  // hits / samples
    double ci_low = 0.0;    // Wilson score interval at the configured level
    double ci_high = 0.0;
    std::uint64_t seed = 0;
};

// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(long long hits, long long samples, double level);

// Two-sided normal quantile used by the interval.
double inverse_normal_cdf(double p);

// Draws `samples` i.i.d. variable vectors and counts threshold exceedances
// of |f(y) - E f(Y)| for every lambda in one pass. Draw i uses the
// counter-based stream (seed, i), so hit counts are bit-identical for any
// worker count.
std::vector<TailEstimate> empirical_tail(const MultilinearPolynomial& poly,
                                         const std::vector<DistributionSpec>& dists,
                                         const std::vector<double>& lambdas, long long samples,
                                         std::uint64_t seed, double level = 0.99, int workers = 1);

// One row of the bound comparison table.
struct TailBoundRow {
    double lambda = 0.0;
    RawClamped main;
    RawClamped ss;
    RawClamped hc;
    double bernstein_mu_value = 0.0;   // evaluated at mu_0
    double bernstein_var_value = 0.0;  // evaluated at Var
    bool hc_valid = false;             // all variables gaussian or rademacher
    std::optional<TailEstimate> empirical;
    bool violation = false;  // ci_low exceeds the clamped variance-form bound
};

struct CompareOptions {
    long long samples = 100000;  // 0 disables the empirical columns
    std::uint64_t seed = 20240809;
    double level = 0.99;
    int workers = 1;
};

bool hc_applicable(const std::vector<DistributionSpec>& dists);

// Evaluates every bound and joins the empirical estimates; flags each lambda
// where the lower confidence bound exceeds the clamped bound.
std::vector<TailBoundRow> compare(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                                  const SmoothnessProfile& prof, const std::vector<double>& lambdas,
                                  const BoundConstants& constants, const CompareOptions& options);

// 10-point grid spanning [0.1 sigma, 5 sigma].
std::vector<double> default_lambda_grid(double variance);

}  // namespace polybound

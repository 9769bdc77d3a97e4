#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "polybound/rational.hpp"
#include "polybound/rng.hpp"

namespace polybound {

enum class DistKind {
    Discrete,    // explicit (value, probability) support
    Bernoulli,   // {0,1}, P[1] = p, p in [0,1] (endpoints give constants)
    Rademacher,  // {-1,+1} each with probability 1/2
    Uniform,     // continuous on (a, b), a < b
    Gaussian,    // mean mu, standard deviation sigma > 0
    Exponential, // rate > 0, support (0, inf)
    Poisson,     // lambda > 0, support {0,1,...}
    Geometric,   // p in (0,1), support {1,2,...}, P[X=k] = (1-p)^{k-1} p
};

// One independent variable's law. Parameters are kept as exact rationals
// (JSON numbers convert losslessly) so the moment recursions stay exact.
struct DistributionSpec {
    DistKind kind = DistKind::Rademacher;
    Rat p;           // bernoulli, geometric
    Rat a, b;        // uniform
    Rat mu, sigma;   // gaussian
    Rat rate;        // exponential
    Rat lambda;      // poisson
    std::vector<std::pair<Rat, Rat>> support;  // discrete: (value, prob), sorted by value

    static DistributionSpec discrete(std::vector<std::pair<Rat, Rat>> support);
    static DistributionSpec bernoulli(const Rat& p);
    static DistributionSpec rademacher();
    static DistributionSpec uniform(const Rat& a, const Rat& b);
    static DistributionSpec gaussian(const Rat& mean, const Rat& sigma);
    static DistributionSpec exponential(const Rat& rate);
    static DistributionSpec poisson(const Rat& lambda);
    static DistributionSpec geometric(const Rat& p);

    static DistributionSpec from_json(const nlohmann::json& j);  // throws SchemaError
    nlohmann::json to_json() const;

    void check() const;  // throws SchemaError on invalid parameters
    bool finite_support() const;  // Discrete / Bernoulli / Rademacher
    bool degenerate() const;      // constant almost surely
    std::size_t support_size() const;  // finite kinds only
    std::string describe() const;
};

// Raw moments E[Y^i] up to this order are available for every catalog kind.
inline constexpr int kMomentCap = 32;

// --- exact views --------------------------------------------------------

Rat mean_rat(const DistributionSpec& d);
Rat raw_moment_rat(const DistributionSpec& d, int i);  // exact for all kinds
// E|Y|: exact for every kind except Gaussian.
std::optional<Rat> abs_mean_rat(const DistributionSpec& d);
// E|Y - EY|^i: exact for finite supports only.
std::optional<Rat> central_abs_moment_rat(const DistributionSpec& d, int i);

// --- double views -------------------------------------------------------

double mean(const DistributionSpec& d);
double abs_mean(const DistributionSpec& d);
double raw_moment(const DistributionSpec& d, int i);
double central_abs_moment(const DistributionSpec& d, int i);

// --- central moment boundedness -----------------------------------------

// Smallest automatic L for which E|Z-EZ|^i <= i * L * E|Z-EZ|^{i-1} is
// certified for this catalog:
//   bounded kinds           -> sup |Z - EZ|
//   continuous log-concave  -> E|Z - EZ| / ln 2
//   discrete log-concave    -> 1 + max of the one-sided conditional
//                              mean absolute deviations
// Degenerate variables get L = 0 (all central moments vanish).
double cmb_parameter(const DistributionSpec& d);

struct CmbReport {
    double L = 0.0;
    int i_max = 0;
    double worst_ratio = 0.0;  // max_i E|Z-EZ|^i / (i L E|Z-EZ|^{i-1})
    int worst_i = 0;
    bool pass = false;         // worst_ratio <= 1 + tol
};

CmbReport verify_cmb(const DistributionSpec& d, double L, int i_max, double tol);

// --- sampling -------------------------------------------------------------

// One variate. Identical (seed, stream) state gives bit-identical output.
double sample(const DistributionSpec& d, RngStream& rng);

}  // namespace polybound

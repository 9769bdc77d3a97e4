#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "polybound/smoothness.hpp"

namespace polybound {

// The tail and moment inequalities hold with some finite universal
// constants; their values are fitted on the shipped corpus and recorded in a
// manifest. Users can override the manifest per run.
struct BoundConstants {
    double R = 1.0;     // tail bound constant (variance and smoothness forms)
    double R4 = 1.0;    // even-moment bound constant
    double R0 = 1.0;    // counting bound constant
    double R_hc = 1.0;  // hypercontractive bound constant

    std::string corpus_hash;  // hash of the corpus the values were fitted on
    std::string fit_date;

    static BoundConstants from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct RawClamped {
    double raw = 0.0;      // may exceed 1 (the e^2 * max(...) form is not a probability)
    double clamped = 0.0;  // min(raw, 1)
};

// exp(-lambda^2 / (2 mu + 2 lambda / 3)); the linear sum bound in mean form.
double bernstein_mu(double lambda, double mu0_sum);
// exp(-lambda^2 / (2 V + 2 lambda / 3)); the linear sum bound in variance form.
double bernstein_var(double lambda, double variance);

// e^2 * max( exp(-lambda^2 / (Var R^q)),
//            max_{r in [q]} exp(-(lambda / (mu_r L^r R^q))^{1/r}) ).
// Terms whose scale parameter vanishes contribute 0.
RawClamped main_tail_bound(double lambda, const SmoothnessProfile& profile, const BoundConstants& constants);

// e^2 * max( exp(-lambda^2 / max_{r in [q]}(mu_0 mu_r L^r R^q)), same tail terms ).
// Stated for nonnegative coefficients; signed inputs are evaluated on |w_h|.
RawClamped ss_tail_bound(double lambda, const SmoothnessProfile& profile, const BoundConstants& constants);

// e^2 * exp(-(lambda^2 / (R_hc Var))^{1/q}); valid for gaussian or
// rademacher variables (the caller tracks validity).
RawClamped hc_tail_bound(double lambda, double variance, int q, const BoundConstants& constants);

// max( (k R4^q Var)^{k/2}, max_{t in [q]} (k^t R4^q L^t mu_t)^k ) for even k.
double even_moment_bound(int k, const SmoothnessProfile& profile, const BoundConstants& constants);

struct VarBoundCheck {
    bool holds = false;
    double slack = 0.0;  // rhs / lhs, infinity when the variance is zero
};

// Var <= 2q 4^q max_{r in [q]}(mu_0 mu_r 4^r L^r): the comparison that shows
// the variance form dominates the mu_0-based form.
VarBoundCheck varbound_check(const SmoothnessProfile& profile);

// --- constant fitting -------------------------------------------------------

struct MomentFitCase {
    SmoothnessProfile profile;
    std::vector<std::pair<int, double>> central_even_moments;  // (k, exact value)
};

struct TailFitPoint {
    double lambda = 0.0;
    double ci_low = 0.0;  // lower confidence bound on the empirical tail
};

struct TailFitCase {
    SmoothnessProfile profile;
    std::vector<TailFitPoint> points;
    bool hc_valid = false;  // all variables gaussian or rademacher
};

inline constexpr double kFitSearchCap = 1e6;
inline constexpr double kFitRelTol = 1e-3;

// Minimal constants (bisection to kFitRelTol relative, deterministic) making
// the corresponding inequality hold on every corpus element. The returned
// value always satisfies the constraints. Throws FitDivergence past the cap.
double fit_R4(const std::vector<MomentFitCase>& corpus);
double fit_R(const std::vector<TailFitCase>& corpus);
double fit_R_hc(const std::vector<TailFitCase>& corpus);  // hc-valid cases only

}  // namespace polybound

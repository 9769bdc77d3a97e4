#include "polybound/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "polybound/errors.hpp"

namespace polybound {

namespace {

const double kESquared = std::exp(2.0);

double clamp01(double raw) { return std::min(raw, 1.0); }

void check_lambda(double lambda) {
    if (lambda < 0 || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
}

// exp(-lambda^2 / scale) with the convention that a vanishing scale sends
// the exponent to -infinity (term 0), and lambda = 0 with a positive scale
// gives exp(0) = 1.
double gaussian_term(double lambda, double scale) {
    if (scale <= 0) return 0.0;
    return std::exp(-lambda * lambda / scale);
}

// exp(-(lambda/scale)^{1/r}) with the same zero-scale convention.
double stretched_term(double lambda, double scale, int r) {
    if (scale <= 0) return 0.0;
    return std::exp(-std::pow(lambda / scale, 1.0 / r));
}

}  // namespace

double bernstein_mu(double lambda, double mu0_sum) {
    check_lambda(lambda);
    if (mu0_sum < 0) throw std::invalid_argument("mean sum must be >= 0");
    double denom = 2 * mu0_sum + 2 * lambda / 3;
    if (denom == 0) return 1.0;  // lambda = mu = 0
    return std::exp(-lambda * lambda / denom);
}

double bernstein_var(double lambda, double variance) {
    check_lambda(lambda);
    if (variance < 0) throw std::invalid_argument("variance must be >= 0");
    double denom = 2 * variance + 2 * lambda / 3;
    if (denom == 0) return 1.0;
    return std::exp(-lambda * lambda / denom);
}

RawClamped main_tail_bound(double lambda, const SmoothnessProfile& profile, const BoundConstants& constants) {
    check_lambda(lambda);
    double rq = std::pow(constants.R, profile.q);
    double best = gaussian_term(lambda, profile.variance * rq);
    for (int r = 1; r <= profile.q; ++r) {
        double scale = profile.mu[r] * std::pow(profile.L, r) * rq;
        best = std::max(best, stretched_term(lambda, scale, r));
    }
    double raw = kESquared * best;
    return {raw, clamp01(raw)};
}

RawClamped ss_tail_bound(double lambda, const SmoothnessProfile& profile, const BoundConstants& constants) {
    check_lambda(lambda);
    double rq = std::pow(constants.R, profile.q);
    double gauss_scale = 0.0;
    for (int r = 1; r <= profile.q; ++r) {
        gauss_scale = std::max(gauss_scale, profile.mu[0] * profile.mu[r] * std::pow(profile.L, r) * rq);
    }
    double best = gaussian_term(lambda, gauss_scale);
    for (int r = 1; r <= profile.q; ++r) {
        double scale = profile.mu[r] * std::pow(profile.L, r) * rq;
        best = std::max(best, stretched_term(lambda, scale, r));
    }
    double raw = kESquared * best;
    return {raw, clamp01(raw)};
}

RawClamped hc_tail_bound(double lambda, double variance, int q, const BoundConstants& constants) {
    check_lambda(lambda);
    if (variance < 0) throw std::invalid_argument("variance must be >= 0");
    if (q < 1) {
        // constant polynomial never deviates
        return {0.0, 0.0};
    }
    double scale = constants.R_hc * variance;
    double term = (scale <= 0) ? 0.0 : std::exp(-std::pow(lambda * lambda / scale, 1.0 / q));
    double raw = kESquared * term;
    return {raw, clamp01(raw)};
}

double even_moment_bound(int k, const SmoothnessProfile& profile, const BoundConstants& constants) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("even moment bound needs even k >= 2");
    double r4q = std::pow(constants.R4, profile.q);
    double best = std::pow(k * r4q * profile.variance, k / 2.0);
    for (int t = 1; t <= profile.q; ++t) {
        double base = std::pow(static_cast<double>(k), t) * r4q * std::pow(profile.L, t) * profile.mu[t];
        best = std::max(best, std::pow(base, k));
    }
    return best;
}

VarBoundCheck varbound_check(const SmoothnessProfile& profile) {
    double rhs_max = 0.0;
    for (int r = 1; r <= profile.q; ++r) {
        rhs_max = std::max(rhs_max, profile.mu[0] * profile.mu[r] * std::pow(4.0 * profile.L, r));
    }
    double rhs = 2.0 * profile.q * std::pow(4.0, profile.q) * rhs_max;
    VarBoundCheck check;
    if (profile.variance <= 0) {
        check.holds = true;
        check.slack = std::numeric_limits<double>::infinity();
    } else {
        check.holds = profile.variance <= rhs;
        check.slack = rhs / profile.variance;
    }
    return check;
}

namespace {

// Minimal constant in [1, cap] satisfying the monotone predicate, bisected
// to kFitRelTol relative width. Returns a value that satisfies it.
double fit_minimal(const std::function<bool(double)>& holds_at) {
    if (holds_at(1.0)) return 1.0;
    double lo = 1.0, hi = 2.0;
    while (!holds_at(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > kFitSearchCap) {
            throw FitDivergence("no constant below " + std::to_string(kFitSearchCap) +
                                " satisfies the corpus (implementation defect)");
        }
    }
    while (hi - lo > kFitRelTol * hi) {
        double mid = 0.5 * (lo + hi);
        if (holds_at(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

double fit_R4(const std::vector<MomentFitCase>& corpus) {
    if (corpus.empty()) throw std::invalid_argument("empty fitting corpus");
    return fit_minimal([&](double r4) {
        BoundConstants c;
        c.R4 = r4;
        for (const auto& item : corpus) {
            for (const auto& [k, moment] : item.central_even_moments) {
                if (moment > even_moment_bound(k, item.profile, c)) return false;
            }
        }
        return true;
    });
}

double fit_R(const std::vector<TailFitCase>& corpus) {
    if (corpus.empty()) throw std::invalid_argument("empty fitting corpus");
    return fit_minimal([&](double r) {
        BoundConstants c;
        c.R = r;
        for (const auto& item : corpus) {
            for (const auto& point : item.points) {
                if (point.ci_low > main_tail_bound(point.lambda, item.profile, c).clamped) return false;
            }
        }
        return true;
    });
}

double fit_R_hc(const std::vector<TailFitCase>& corpus) {
    bool any = false;
    for (const auto& item : corpus) any = any || item.hc_valid;
    if (!any) throw std::invalid_argument("no hypercontractivity-eligible corpus instances");
    return fit_minimal([&](double r_hc) {
        BoundConstants c;
        c.R_hc = r_hc;
        for (const auto& item : corpus) {
            if (!item.hc_valid) continue;
            for (const auto& point : item.points) {
                if (point.ci_low >
                    hc_tail_bound(point.lambda, item.profile.variance, item.profile.q, c).clamped) {
                    return false;
                }
            }
        }
        return true;
    });
}

BoundConstants BoundConstants::from_json(const nlohmann::json& j) {
    BoundConstants c;
    try {
        c.R = j.at("R").get<double>();
        c.R4 = j.at("R4").get<double>();
        c.R0 = j.at("R0").get<double>();
        c.R_hc = j.at("R_hc").get<double>();
        if (j.contains("corpus_hash")) c.corpus_hash = j["corpus_hash"].get<std::string>();
        if (j.contains("fit_date")) c.fit_date = j["fit_date"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("constants manifest: ") + e.what());
    }
    if (!(c.R_hc > 0)) throw SchemaError("constants manifest: R_hc must be > 0");
    return c;
}

nlohmann::json BoundConstants::to_json() const {
    return nlohmann::json{{"R", R},       {"R4", R4},
                          {"R0", R0},     {"R_hc", R_hc},
                          {"corpus_hash", corpus_hash}, {"fit_date", fit_date}};
}

}  // namespace polybound

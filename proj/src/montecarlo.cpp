#include "polybound/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "polybound/moments.hpp"
#include "polybound/rng.hpp"

namespace polybound {

double inverse_normal_cdf(double p) {
    if (!(p > 0.0) || !(p < 1.0)) throw std::invalid_argument("quantile argument must lie in (0,1)");
    // Acklam's rational approximation, |relative error| < 1.2e-9.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,  -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double p_low = 0.02425;
    double q, r;
    if (p < p_low) {
        q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p <= 1 - p_low) {
        q = p - 0.5;
        r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    }
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
}

std::pair<double, double> wilson_interval(long long hits, long long samples, double level) {
    if (samples < 1) throw std::invalid_argument("wilson interval needs samples >= 1");
    if (hits < 0 || hits > samples) throw std::invalid_argument("hits must lie in [0, samples]");
    if (!(level > 0.0) || !(level < 1.0)) throw std::invalid_argument("level must lie in (0,1)");
    double z = inverse_normal_cdf(1.0 - (1.0 - level) / 2.0);
    double n = static_cast<double>(samples);
    double phat = static_cast<double>(hits) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    double low = std::max(0.0, center - half);
    double high = std::min(1.0, center + half);
    if (hits == 0) low = 0.0;
    if (hits == samples) high = 1.0;
    return {low, high};
}

namespace {

struct FlatPoly {
    double constant = 0.0;
    std::vector<double> weights;
    std::vector<std::vector<int>> verts;  // nonempty edges only
};

FlatPoly flatten_double(const MultilinearPolynomial& poly) {
    FlatPoly flat;
    for (const auto& [edge, w] : poly.terms()) {
        if (edge.empty()) {
            flat.constant += to_double(w);
        } else {
            flat.weights.push_back(to_double(w));
            flat.verts.push_back(edge.vertices());
        }
    }
    return flat;
}

}  // namespace

std::vector<TailEstimate> empirical_tail(const MultilinearPolynomial& poly,
                                         const std::vector<DistributionSpec>& dists,
                                         const std::vector<double>& lambdas, long long samples,
                                         std::uint64_t seed, double level, int workers) {
    if (samples < 1) throw std::invalid_argument("empirical_tail needs samples >= 1");
    if (workers < 1) workers = 1;
    const double mean_value = exact_mean(poly, dists);
    const FlatPoly flat = flatten_double(poly);
    const std::size_t m = lambdas.size();

    auto run_range = [&](long long begin, long long end, std::vector<long long>& hits) {
        std::vector<double> y(dists.size());
        for (long long i = begin; i < end; ++i) {
            RngStream stream(seed, static_cast<std::uint64_t>(i));
            for (std::size_t v = 0; v < dists.size(); ++v) y[v] = sample(dists[v], stream);
            double value = flat.constant;
            for (std::size_t e = 0; e < flat.weights.size(); ++e) {
                double term = flat.weights[e];
                for (int v : flat.verts[e]) term *= y[v - 1];
                value += term;
            }
            double deviation = std::abs(value - mean_value);
            for (std::size_t j = 0; j < m; ++j) {
                if (deviation >= lambdas[j]) ++hits[j];
            }
        }
    };

    std::vector<std::vector<long long>> partial(workers, std::vector<long long>(m, 0));
    if (workers == 1) {
        run_range(0, samples, partial[0]);
    } else {
        long long chunk = (samples + workers - 1) / workers;
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w) {
            long long begin = w * chunk;
            long long end = std::min(samples, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(run_range, begin, end, std::ref(partial[w]));
        }
        for (auto& t : threads) t.join();
    }

    std::vector<TailEstimate> estimates(m);
    for (std::size_t j = 0; j < m; ++j) {
        long long hits = 0;
        for (int w = 0; w < workers; ++w) hits += partial[w][j];
        TailEstimate& est = estimates[j];
        est.lambda = lambdas[j];
        est.samples = samples;
        est.hits = hits;
        est.estimate = static_cast<double>(hits) / static_cast<double>(samples);
        auto [low, high] = wilson_interval(hits, samples, level);
        est.ci_low = low;
        est.ci_high = high;
        est.seed = seed;
    }
    return estimates;
}

bool hc_applicable(const std::vector<DistributionSpec>& dists) {
    for (const auto& d : dists) {
        if (d.kind != DistKind::Gaussian && d.kind != DistKind::Rademacher) return false;
    }
    return true;
}

std::vector<TailBoundRow> compare(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                                  const SmoothnessProfile& prof, const std::vector<double>& lambdas,
                                  const BoundConstants& constants, const CompareOptions& options) {
    std::vector<double> sorted = lambdas;
    std::sort(sorted.begin(), sorted.end());

    std::vector<TailEstimate> estimates;
    if (options.samples > 0) {
        estimates =
            empirical_tail(poly, dists, sorted, options.samples, options.seed, options.level, options.workers);
    }

    bool hc_ok = hc_applicable(dists);
    std::vector<TailBoundRow> rows(sorted.size());
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        TailBoundRow& row = rows[j];
        row.lambda = sorted[j];
        row.main = main_tail_bound(row.lambda, prof, constants);
        row.ss = ss_tail_bound(row.lambda, prof, constants);
        row.hc = hc_tail_bound(row.lambda, prof.variance, prof.q, constants);
        row.bernstein_mu_value = bernstein_mu(row.lambda, prof.mu.empty() ? 0.0 : prof.mu[0]);
        row.bernstein_var_value = bernstein_var(row.lambda, prof.variance);
        row.hc_valid = hc_ok;
        if (options.samples > 0) {
            row.empirical = estimates[j];
            row.violation = estimates[j].ci_low > row.main.clamped;
        }
    }
    return rows;
}

std::vector<double> default_lambda_grid(double variance) {
    double sigma = std::sqrt(std::max(0.0, variance));
    if (sigma <= 0) sigma = 1.0;  // degenerate instances still get a grid
    std::vector<double> grid(10);
    for (int i = 0; i < 10; ++i) grid[i] = sigma * (0.1 + (5.0 - 0.1) * i / 9.0);
    return grid;
}

}  // namespace polybound

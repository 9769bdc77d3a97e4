#include "polybound/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "polybound/errors.hpp"

namespace polybound {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_moment_order(int i) {
    if (i < 0) throw std::invalid_argument("moment order must be >= 0");
    if (i > kMomentCap) {
        throw CapExceeded("moment order " + std::to_string(i) + " exceeds cap " + std::to_string(kMomentCap));
    }
}

// Sums pmf(k) * g(k) over an infinite integer support. Terms first grow
// toward a peak and then decay superexponentially; stop once they are
// negligible against the accumulated sum.
template <typename Pmf, typename Term>
double tail_sum(long long k_start, Pmf pmf_step, double pmf_first, Term term_of, double peak_hint) {
    double acc = 0.0;
    double pk = pmf_first;
    long long k = k_start;
    int small_streak = 0;
    for (long long iter = 0; iter < 2000000; ++iter, ++k) {
        double term = pk * term_of(static_cast<double>(k));
        acc += term;
        if (static_cast<double>(k) > peak_hint) {
            if (std::abs(term) <= 1e-18 * (std::abs(acc) + 1e-300)) {
                if (++small_streak >= 4) break;
            } else {
                small_streak = 0;
            }
        }
        pk = pmf_step(k, pk);
    }
    return acc;
}

}  // namespace

// --- construction and validation -----------------------------------------

DistributionSpec DistributionSpec::discrete(std::vector<std::pair<Rat, Rat>> support) {
    DistributionSpec d;
    d.kind = DistKind::Discrete;
    d.support = std::move(support);
    d.check();
    return d;
}

DistributionSpec DistributionSpec::bernoulli(const Rat& p) {
    DistributionSpec d;
    d.kind = DistKind::Bernoulli;
    d.p = p;
    d.check();
    return d;
}

DistributionSpec DistributionSpec::rademacher() {
    DistributionSpec d;
    d.kind = DistKind::Rademacher;
    return d;
}

DistributionSpec DistributionSpec::uniform(const Rat& a, const Rat& b) {
    DistributionSpec d;
    d.kind = DistKind::Uniform;
    d.a = a;
    d.b = b;
    d.check();
    return d;
}

DistributionSpec DistributionSpec::gaussian(const Rat& mean, const Rat& sigma) {
    DistributionSpec d;
    d.kind = DistKind::Gaussian;
    d.mu = mean;
    d.sigma = sigma;
    d.check();
    return d;
}

DistributionSpec DistributionSpec::exponential(const Rat& rate) {
    DistributionSpec d;
    d.kind = DistKind::Exponential;
    d.rate = rate;
    d.check();
    return d;
}

DistributionSpec DistributionSpec::poisson(const Rat& lambda) {
    DistributionSpec d;
    d.kind = DistKind::Poisson;
    d.lambda = lambda;
    d.check();
    return d;
}

DistributionSpec DistributionSpec::geometric(const Rat& p) {
    DistributionSpec d;
    d.kind = DistKind::Geometric;
    d.p = p;
    d.check();
    return d;
}

void DistributionSpec::check() const {
    switch (kind) {
        case DistKind::Discrete: {
            if (support.empty()) throw SchemaError("discrete distribution needs a nonempty support");
            Rat total(0);
            for (const auto& [value, prob] : support) {
                (void)value;
                if (prob < 0) throw SchemaError("discrete distribution has a negative probability");
                total += prob;
            }
            double err = std::abs(to_double(total) - 1.0);
            if (err > 1e-12) throw SchemaError("discrete probabilities sum to " + rat_to_string(total) + ", not 1");
            for (std::size_t i = 0; i + 1 < support.size(); ++i) {
                if (!(support[i].first < support[i + 1].first)) {
                    throw SchemaError("discrete support values must be strictly increasing");
                }
            }
            break;
        }
        case DistKind::Bernoulli:
            if (p < 0 || p > 1) throw SchemaError("bernoulli parameter must lie in [0,1]");
            break;
        case DistKind::Rademacher:
            break;
        case DistKind::Uniform:
            if (!(a < b)) throw SchemaError("uniform distribution needs a < b");
            break;
        case DistKind::Gaussian:
            if (!(sigma > 0)) throw SchemaError("gaussian sigma must be > 0");
            break;
        case DistKind::Exponential:
            if (!(rate > 0)) throw SchemaError("exponential rate must be > 0");
            break;
        case DistKind::Poisson:
            if (!(lambda > 0)) throw SchemaError("poisson lambda must be > 0");
            break;
        case DistKind::Geometric:
            if (!(p > 0) || !(p < 1)) throw SchemaError("geometric parameter must lie in (0,1)");
            break;
    }
}

bool DistributionSpec::finite_support() const {
    return kind == DistKind::Discrete || kind == DistKind::Bernoulli || kind == DistKind::Rademacher;
}

bool DistributionSpec::degenerate() const {
    switch (kind) {
        case DistKind::Bernoulli:
            return p == 0 || p == 1;
        case DistKind::Discrete: {
            int live = 0;
            for (const auto& [value, prob] : support) {
                (void)value;
                if (prob > 0) ++live;
            }
            return live <= 1;
        }
        default:
            return false;
    }
}

std::size_t DistributionSpec::support_size() const {
    switch (kind) {
        case DistKind::Discrete:
            return support.size();
        case DistKind::Bernoulli:
        case DistKind::Rademacher:
            return 2;
        default:
            throw std::invalid_argument("support_size: distribution has infinite support");
    }
}

std::string DistributionSpec::describe() const {
    std::ostringstream out;
    switch (kind) {
        case DistKind::Discrete:
            out << "discrete(" << support.size() << " points)";
            break;
        case DistKind::Bernoulli:
            out << "bernoulli(p=" << rat_to_string(p) << ")";
            break;
        case DistKind::Rademacher:
            out << "rademacher";
            break;
        case DistKind::Uniform:
            out << "uniform(" << rat_to_string(a) << "," << rat_to_string(b) << ")";
            break;
        case DistKind::Gaussian:
            out << "gaussian(mean=" << rat_to_string(mu) << ",sigma=" << rat_to_string(sigma) << ")";
            break;
        case DistKind::Exponential:
            out << "exponential(rate=" << rat_to_string(rate) << ")";
            break;
        case DistKind::Poisson:
            out << "poisson(lambda=" << rat_to_string(lambda) << ")";
            break;
        case DistKind::Geometric:
            out << "geometric(p=" << rat_to_string(p) << ")";
            break;
    }
    return out.str();
}

// --- exact moments --------------------------------------------------------

namespace {

std::vector<std::pair<Rat, Rat>> finite_points(const DistributionSpec& d) {
    switch (d.kind) {
        case DistKind::Discrete:
            return d.support;
        case DistKind::Bernoulli:
            return {{Rat(0), Rat(1) - d.p}, {Rat(1), d.p}};
        case DistKind::Rademacher:
            return {{Rat(-1), Rat(1, 2)}, {Rat(1), Rat(1, 2)}};
        default:
            throw std::invalid_argument("finite_points: infinite support");
    }
}

}  // namespace

Rat mean_rat(const DistributionSpec& d) {
    switch (d.kind) {
        case DistKind::Discrete: {
            Rat m(0);
            for (const auto& [x, prob] : d.support) m += prob * x;
            return m;
        }
        case DistKind::Bernoulli:
            return d.p;
        case DistKind::Rademacher:
            return Rat(0);
        case DistKind::Uniform:
            return (d.a + d.b) / 2;
        case DistKind::Gaussian:
            return d.mu;
        case DistKind::Exponential:
            return Rat(1) / d.rate;
        case DistKind::Poisson:
            return d.lambda;
        case DistKind::Geometric:
            return Rat(1) / d.p;
    }
    throw std::logic_error("unreachable");
}

Rat raw_moment_rat(const DistributionSpec& d, int i) {
    require_moment_order(i);
    if (i == 0) return Rat(1);
    switch (d.kind) {
        case DistKind::Discrete: {
            Rat m(0);
            for (const auto& [x, prob] : d.support) m += prob * rat_pow(x, i);
            return m;
        }
        case DistKind::Bernoulli:
            return d.p;
        case DistKind::Rademacher:
            return (i % 2 == 0) ? Rat(1) : Rat(0);
        case DistKind::Uniform:
            // integral of x^i over (a,b) divided by the width
            return (rat_pow(d.b, i + 1) - rat_pow(d.a, i + 1)) / (Rat(i + 1) * (d.b - d.a));
        case DistKind::Gaussian: {
            // M_i = mu * M_{i-1} + (i-1) * sigma^2 * M_{i-2}
            Rat sigma2 = d.sigma * d.sigma;
            Rat prev(1), cur = d.mu;
            for (int j = 2; j <= i; ++j) {
                Rat next = d.mu * cur + Rat(j - 1) * sigma2 * prev;
                prev = cur;
                cur = next;
            }
            return cur;
        }
        case DistKind::Exponential:
            return Rat(factorial(i)) / rat_pow(d.rate, i);
        case DistKind::Poisson: {
            // M_{j+1} = lambda * sum_{t<=j} C(j,t) M_t
            std::vector<Rat> m(i + 1);
            m[0] = Rat(1);
            for (int j = 0; j < i; ++j) {
                Rat s(0);
                for (int t = 0; t <= j; ++t) s += Rat(binomial(j, t)) * m[t];
                m[j + 1] = d.lambda * s;
            }
            return m[i];
        }
        case DistKind::Geometric: {
            // memorylessness: M_j = 1 + ((1-p)/p) * sum_{t<j} C(j,t) M_t
            Rat ratio = (Rat(1) - d.p) / d.p;
            std::vector<Rat> m(i + 1);
            m[0] = Rat(1);
            for (int j = 1; j <= i; ++j) {
                Rat s(0);
                for (int t = 0; t < j; ++t) s += Rat(binomial(j, t)) * m[t];
                m[j] = Rat(1) + ratio * s;
            }
            return m[i];
        }
    }
    throw std::logic_error("unreachable");
}

std::optional<Rat> abs_mean_rat(const DistributionSpec& d) {
    switch (d.kind) {
        case DistKind::Discrete: {
            Rat m(0);
            for (const auto& [x, prob] : d.support) m += prob * abs(x);
            return m;
        }
        case DistKind::Bernoulli:
            return d.p;
        case DistKind::Rademacher:
            return Rat(1);
        case DistKind::Uniform: {
            if (d.a >= 0) return (d.a + d.b) / 2;
            if (d.b <= 0) return -(d.a + d.b) / 2;
            return (d.a * d.a + d.b * d.b) / (2 * (d.b - d.a));
        }
        case DistKind::Gaussian:
            return std::nullopt;  // folded-normal mean is irrational
        case DistKind::Exponential:
            return Rat(1) / d.rate;
        case DistKind::Poisson:
            return d.lambda;
        case DistKind::Geometric:
            return Rat(1) / d.p;
    }
    throw std::logic_error("unreachable");
}

std::optional<Rat> central_abs_moment_rat(const DistributionSpec& d, int i) {
    require_moment_order(i);
    if (!d.finite_support()) return std::nullopt;
    if (i == 0) return Rat(1);
    Rat m = mean_rat(d);
    Rat acc(0);
    for (const auto& [x, prob] : finite_points(d)) acc += prob * rat_pow(abs(x - m), i);
    return acc;
}

// --- double moments -------------------------------------------------------

double mean(const DistributionSpec& d) { return to_double(mean_rat(d)); }

double abs_mean(const DistributionSpec& d) {
    if (d.kind == DistKind::Gaussian) {
        // folded normal mean
        double m = to_double(d.mu);
        double s = to_double(d.sigma);
        return s * std::sqrt(2.0 / kPi) * std::exp(-m * m / (2 * s * s)) + m * std::erf(m / (s * std::sqrt(2.0)));
    }
    return to_double(*abs_mean_rat(d));
}

double raw_moment(const DistributionSpec& d, int i) { return to_double(raw_moment_rat(d, i)); }

namespace {

// E|Z|^i for standard normal Z: g_0 = 1, g_1 = sqrt(2/pi), g_i = (i-1) g_{i-2}.
double gaussian_abs_moment_std(int i) {
    double prev = 1.0;
    double cur = std::sqrt(2.0 / kPi);
    if (i == 0) return prev;
    for (int j = 2; j <= i; ++j) {
        double next = (j - 1) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

// J_i = integral of t^i e^t over (0,1), by the backward recursion
// J_{n-1} = (e - J_n) / n, which contracts any seed error.
double exp_unit_integral(int i) {
    int start = i + 60;
    double j = std::exp(1.0) / (start + 1);
    for (int n = start; n > i; --n) j = (std::exp(1.0) - j) / n;
    return j;
}

double central_abs_moment_infinite(const DistributionSpec& d, int i) {
    double m = mean(d);
    auto dev = [m, i](double k) { return std::pow(std::abs(k - m), i); };
    switch (d.kind) {
        case DistKind::Poisson: {
            double lam = to_double(d.lambda);
            return tail_sum(
                0, [lam](long long k, double pk) { return pk * lam / static_cast<double>(k + 1); },
                std::exp(-lam), dev, lam + i + 10);
        }
        case DistKind::Geometric: {
            double p = to_double(d.p);
            return tail_sum(
                1, [p](long long, double pk) { return pk * (1.0 - p); }, p, dev,
                m + (i + 10) / std::max(1e-12, -std::log1p(-p)));
        }
        default:
            throw std::logic_error("central_abs_moment_infinite: unexpected kind");
    }
}

}  // namespace

double central_abs_moment(const DistributionSpec& d, int i) {
    require_moment_order(i);
    if (i == 0) return 1.0;
    if (d.finite_support()) return to_double(*central_abs_moment_rat(d, i));
    switch (d.kind) {
        case DistKind::Uniform: {
            double w = to_double(d.b - d.a) / 2.0;
            return std::pow(w, i) / (i + 1);
        }
        case DistKind::Gaussian:
            return std::pow(to_double(d.sigma), i) * gaussian_abs_moment_std(i);
        case DistKind::Exponential: {
            // scale to rate 1: E|W-1|^i = (J_i + i!) / e
            double fact = 1.0;
            for (int j = 2; j <= i; ++j) fact *= j;
            double unit = (exp_unit_integral(i) + fact) / std::exp(1.0);
            return unit / std::pow(to_double(d.rate), i);
        }
        case DistKind::Poisson:
        case DistKind::Geometric:
            return central_abs_moment_infinite(d, i);
        default:
            throw std::logic_error("unreachable");
    }
}

// --- central moment boundedness -------------------------------------------

namespace {

// 1 + max of the conditional mean absolute deviations above/below the mean,
// for integer-valued log-concave laws. Both one-sided sums reduce to the
// finite below-mean part because the signed deviations cancel.
double discrete_logconcave_L(const DistributionSpec& d) {
    double m = mean(d);
    double cut = std::ceil(m);  // X >= EX  <=>  k >= ceil(EX) for integer k
    double below_num = 0.0, below_prob = 0.0;

    auto accumulate = [&](double k, double pk) {
        if (k < cut) {
            below_num += (m - k) * pk;
            below_prob += pk;
        }
    };

    if (d.kind == DistKind::Poisson) {
        double lam = to_double(d.lambda);
        double pk = std::exp(-lam);
        for (long long k = 0; k < static_cast<long long>(cut); ++k) {
            accumulate(static_cast<double>(k), pk);
            pk *= lam / static_cast<double>(k + 1);
        }
    } else {
        double p = to_double(d.p);
        double pk = p;
        for (long long k = 1; k < static_cast<long long>(cut); ++k) {
            accumulate(static_cast<double>(k), pk);
            pk *= (1.0 - p);
        }
    }
    double above_num = below_num;  // E[X - EX] = 0
    double above_prob = 1.0 - below_prob;
    double up = above_prob > 0 ? above_num / above_prob : 0.0;
    double down = below_prob > 0 ? below_num / below_prob : 0.0;
    return 1.0 + std::max(up, down);
}

}  // namespace

double cmb_parameter(const DistributionSpec& d) {
    if (d.degenerate()) return 0.0;
    switch (d.kind) {
        case DistKind::Discrete:
        case DistKind::Bernoulli:
        case DistKind::Rademacher: {
            // bounded variable: sup |Z - EZ| over the support
            Rat m = mean_rat(d);
            Rat best(0);
            for (const auto& [x, prob] : finite_points(d)) {
                if (prob > 0) best = std::max(best, Rat(abs(x - m)));
            }
            return to_double(best);
        }
        case DistKind::Uniform:
        case DistKind::Gaussian:
        case DistKind::Exponential:
            // continuous log-concave
            return central_abs_moment(d, 1) / std::log(2.0);
        case DistKind::Poisson:
        case DistKind::Geometric:
            // discrete log-concave
            return discrete_logconcave_L(d);
    }
    throw UnsupportedDistribution("no automatic central-moment bound for " + d.describe());
}

CmbReport verify_cmb(const DistributionSpec& d, double L, int i_max, double tol) {
    if (i_max < 1) throw std::invalid_argument("verify_cmb: i_max must be >= 1");
    CmbReport report;
    report.L = L;
    report.i_max = i_max;
    double prev = 1.0;  // E|Z-EZ|^0
    for (int i = 1; i <= i_max; ++i) {
        double cur = central_abs_moment(d, i);
        double denom = i * L * prev;
        double ratio;
        if (denom == 0.0) {
            ratio = (cur == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            ratio = cur / denom;
        }
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_i = i;
        }
        prev = cur;
    }
    report.pass = report.worst_ratio <= 1.0 + tol;
    return report;
}

// --- sampling ---------------------------------------------------------------

double sample(const DistributionSpec& d, RngStream& rng) {
    switch (d.kind) {
        case DistKind::Discrete: {
            double u = rng.next_unit();
            double cdf = 0.0;
            for (const auto& [x, prob] : d.support) {
                cdf += to_double(prob);
                if (u < cdf) return to_double(x);
            }
            return to_double(d.support.back().first);
        }
        case DistKind::Bernoulli:
            return rng.next_unit() < to_double(d.p) ? 1.0 : 0.0;
        case DistKind::Rademacher:
            return rng.next_unit() < 0.5 ? -1.0 : 1.0;
        case DistKind::Uniform:
            return to_double(d.a) + to_double(d.b - d.a) * rng.next_unit();
        case DistKind::Gaussian: {
            double u1 = rng.next_unit();
            double u2 = rng.next_unit();
            if (u1 <= 0.0) u1 = 0x1.0p-53;
            double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
            return to_double(d.mu) + to_double(d.sigma) * z;
        }
        case DistKind::Exponential:
            return -std::log1p(-rng.next_unit()) / to_double(d.rate);
        case DistKind::Poisson: {
            double lam = to_double(d.lambda);
            double u = rng.next_unit();
            double pk = std::exp(-lam);
            double cdf = pk;
            long long k = 0;
            long long cap = static_cast<long long>(lam + 60.0 * std::sqrt(lam) + 200.0);
            while (u >= cdf && k < cap) {
                ++k;
                pk *= lam / static_cast<double>(k);
                cdf += pk;
            }
            return static_cast<double>(k);
        }
        case DistKind::Geometric: {
            double p = to_double(d.p);
            double u = rng.next_unit();
            double k = 1.0 + std::floor(std::log1p(-u) / std::log1p(-p));
            return std::max(1.0, k);
        }
    }
    throw std::logic_error("unreachable");
}

// --- JSON -------------------------------------------------------------------

namespace {

Rat rat_field(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) throw SchemaError("distribution: missing field \"" + key + "\"");
    const auto& v = j[key];
    if (v.is_string()) return parse_rat(v.get<std::string>());
    if (v.is_number_integer()) return Rat(v.get<long long>());
    if (v.is_number_float()) return rat_from_double(v.get<double>());
    throw SchemaError("distribution: field \"" + key + "\" must be a number or rational string");
}

Rat rat_value(const nlohmann::json& v, const std::string& what) {
    if (v.is_string()) return parse_rat(v.get<std::string>());
    if (v.is_number_integer()) return Rat(v.get<long long>());
    if (v.is_number_float()) return rat_from_double(v.get<double>());
    throw SchemaError("distribution: " + what + " must be a number or rational string");
}

nlohmann::json rat_to_json(const Rat& r) {
    if (fits_double(r)) return to_double(r);
    return rat_to_string(r);
}

}  // namespace

DistributionSpec DistributionSpec::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw SchemaError("distribution: expected an object with a string \"kind\"");
    }
    std::string kind = j["kind"].get<std::string>();
    if (kind == "discrete") {
        if (!j.contains("support") || !j["support"].is_array()) {
            throw SchemaError("discrete distribution needs a \"support\" array");
        }
        std::map<Rat, Rat> merged;
        for (const auto& pt : j["support"]) {
            if (!pt.is_array() || pt.size() != 2) {
                throw SchemaError("discrete support entries must be [value, probability] pairs");
            }
            Rat x = rat_value(pt[0], "support value");
            Rat prob = rat_value(pt[1], "support probability");
            if (prob == 0) continue;
            merged[x] += prob;
        }
        std::vector<std::pair<Rat, Rat>> support(merged.begin(), merged.end());
        return DistributionSpec::discrete(std::move(support));
    }
    if (kind == "bernoulli") return DistributionSpec::bernoulli(rat_field(j, "p"));
    if (kind == "rademacher") return DistributionSpec::rademacher();
    if (kind == "uniform") return DistributionSpec::uniform(rat_field(j, "a"), rat_field(j, "b"));
    if (kind == "gaussian") return DistributionSpec::gaussian(rat_field(j, "mean"), rat_field(j, "sigma"));
    if (kind == "exponential") return DistributionSpec::exponential(rat_field(j, "rate"));
    if (kind == "poisson") return DistributionSpec::poisson(rat_field(j, "lambda"));
    if (kind == "geometric") return DistributionSpec::geometric(rat_field(j, "p"));
    throw SchemaError("distribution: unknown kind \"" + kind + "\"");
}

nlohmann::json DistributionSpec::to_json() const {
    switch (kind) {
        case DistKind::Discrete: {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& [x, prob] : support) {
                pts.push_back(nlohmann::json::array({rat_to_json(x), rat_to_json(prob)}));
            }
            return {{"kind", "discrete"}, {"support", std::move(pts)}};
        }
        case DistKind::Bernoulli:
            return {{"kind", "bernoulli"}, {"p", rat_to_json(p)}};
        case DistKind::Rademacher:
            return {{"kind", "rademacher"}};
        case DistKind::Uniform:
            return {{"kind", "uniform"}, {"a", rat_to_json(a)}, {"b", rat_to_json(b)}};
        case DistKind::Gaussian:
            return {{"kind", "gaussian"}, {"mean", rat_to_json(mu)}, {"sigma", rat_to_json(sigma)}};
        case DistKind::Exponential:
            return {{"kind", "exponential"}, {"rate", rat_to_json(rate)}};
        case DistKind::Poisson:
            return {{"kind", "poisson"}, {"lambda", rat_to_json(lambda)}};
        case DistKind::Geometric:
            return {{"kind", "geometric"}, {"p", rat_to_json(p)}};
    }
    throw std::logic_error("unreachable");
}

}  // namespace polybound

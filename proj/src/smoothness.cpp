#include "polybound/smoothness.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "polybound/errors.hpp"
#include "polybound/moments.hpp"

namespace polybound {

namespace {

void check_r(const MultilinearPolynomial& poly, int r) {
    if (r < 0 || r > poly.power()) {
        throw std::invalid_argument("subset size " + std::to_string(r) + " outside [0.." +
                                    std::to_string(poly.power()) + "]");
    }
}

template <typename T>
std::vector<T> abs_means(const std::vector<DistributionSpec>& dists) {
    std::vector<T> out(dists.size());
    for (std::size_t v = 0; v < dists.size(); ++v) {
        if constexpr (std::is_same_v<T, Rat>) {
            auto r = abs_mean_rat(dists[v]);
            if (!r) {
                throw std::invalid_argument("exact E|Y| unavailable for " + dists[v].describe());
            }
            out[v] = *r;
        } else {
            out[v] = abs_mean(dists[v]);
        }
    }
    return out;
}

// Walk the size-r subsets S of each edge and accumulate
// |w_h| * prod_{v in h \ S} E|Y_v| into a per-S bucket.
template <typename T>
T mu_aggregate(const MultilinearPolynomial& poly, const std::vector<T>& abs_mean_of, int r) {
    std::map<std::vector<int>, T> buckets;
    std::vector<int> subset(r);
    for (const auto& [edge, weight] : poly.terms()) {
        if (edge.empty() || edge.size() < r) continue;
        const auto& verts = edge.vertices();
        const int m = edge.size();
        T w = [&] {
            if constexpr (std::is_same_v<T, Rat>) {
                return Rat(abs(weight));
            } else {
                return std::abs(to_double(weight));
            }
        }();
        // fixed r-subset enumeration by index combination
        std::vector<int> idx(r);
        for (int i = 0; i < r; ++i) idx[i] = i;
        while (true) {
            T contrib = w;
            int pick = 0;
            for (int i = 0; i < m; ++i) {
                if (pick < r && idx[pick] == i) {
                    subset[pick] = verts[i];
                    ++pick;
                } else {
                    contrib *= abs_mean_of[verts[i] - 1];
                }
            }
            buckets[std::vector<int>(subset.begin(), subset.end())] += contrib;
            // next combination
            int pos = r - 1;
            while (pos >= 0 && idx[pos] == m - r + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int i = pos + 1; i < r; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    T best{};
    for (const auto& [subset_key, value] : buckets) {
        (void)subset_key;
        best = std::max(best, value);
    }
    return best;
}

template <typename T>
T mu_bruteforce_impl(const MultilinearPolynomial& poly, const std::vector<T>& abs_mean_of, int r) {
    if (poly.n() > 20) throw std::invalid_argument("brute-force subset max is guarded to n <= 20");
    T best{};
    std::vector<int> subset(r);
    for (int i = 0; i < r; ++i) subset[i] = i + 1;
    while (true) {
        T total{};
        for (const auto& [edge, weight] : poly.terms()) {
            if (edge.empty() || edge.size() < r) continue;
            bool contains_all = true;
            for (int s : subset) {
                if (!edge.contains(s)) {
                    contains_all = false;
                    break;
                }
            }
            if (!contains_all) continue;
            T term = [&] {
                if constexpr (std::is_same_v<T, Rat>) {
                    return Rat(abs(weight));
                } else {
                    return std::abs(to_double(weight));
                }
            }();
            for (int v : edge.vertices()) {
                if (!std::binary_search(subset.begin(), subset.end(), v)) term *= abs_mean_of[v - 1];
            }
            total += term;
        }
        best = std::max(best, total);
        if (r == 0) break;
        int pos = r - 1;
        while (pos >= 0 && subset[pos] == poly.n() - r + pos + 1) --pos;
        if (pos < 0) break;
        ++subset[pos];
        for (int i = pos + 1; i < r; ++i) subset[i] = subset[i - 1] + 1;
    }
    return best;
}

}  // namespace

double mu(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int r) {
    check_r(poly, r);
    if (r > poly.n()) return 0.0;  // no size-r vertex sets exist
    return mu_aggregate<double>(poly, abs_means<double>(dists), r);
}

Rat mu_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int r) {
    check_r(poly, r);
    if (r > poly.n()) return Rat(0);
    return mu_aggregate<Rat>(poly, abs_means<Rat>(dists), r);
}

double mu_bruteforce(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int r) {
    check_r(poly, r);
    if (r > poly.n()) return 0.0;
    return mu_bruteforce_impl<double>(poly, abs_means<double>(dists), r);
}

Rat mu_bruteforce_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int r) {
    check_r(poly, r);
    if (r > poly.n()) return Rat(0);
    return mu_bruteforce_impl<Rat>(poly, abs_means<Rat>(dists), r);
}

SmoothnessProfile profile(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                          const std::vector<std::optional<double>>& l_overrides) {
    if (static_cast<int>(dists.size()) != poly.n()) {
        throw std::invalid_argument("distribution list length does not match variable count");
    }
    if (!l_overrides.empty() && l_overrides.size() != dists.size()) {
        throw std::invalid_argument("override list length does not match variable count");
    }
    SmoothnessProfile prof;
    prof.q = poly.power();
    prof.mu.resize(prof.q + 1);
    for (int r = 0; r <= prof.q; ++r) prof.mu[r] = mu(poly, dists, r);

    prof.per_variable_L.resize(dists.size());
    for (std::size_t v = 0; v < dists.size(); ++v) {
        if (!l_overrides.empty() && l_overrides[v].has_value()) {
            prof.per_variable_L[v] = *l_overrides[v];
        } else {
            prof.per_variable_L[v] = cmb_parameter(dists[v]);
        }
        prof.L = std::max(prof.L, prof.per_variable_L[v]);
    }

    prof.mean = exact_mean(poly, dists);
    prof.variance = exact_variance(poly, dists);
    return prof;
}

nlohmann::json SmoothnessProfile::to_json() const {
    return nlohmann::json{{"mu", mu}, {"L", L}, {"mean", mean}, {"variance", variance}, {"q", q}};
}

SmoothnessProfile SmoothnessProfile::from_json(const nlohmann::json& j) {
    SmoothnessProfile prof;
    try {
        prof.mu = j.at("mu").get<std::vector<double>>();
        prof.L = j.at("L").get<double>();
        prof.mean = j.at("mean").get<double>();
        prof.variance = j.at("variance").get<double>();
        prof.q = j.at("q").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("profile: ") + e.what());
    }
    if (static_cast<int>(prof.mu.size()) != prof.q + 1) {
        throw SchemaError("profile: mu must have q+1 entries");
    }
    return prof;
}

}  // namespace polybound

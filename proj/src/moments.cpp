#include "polybound/moments.hpp"

#include <algorithm>
#include <cmath>

#include "polybound/errors.hpp"

namespace polybound {

namespace {

void check_dimensions(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists) {
    if (static_cast<int>(dists.size()) != poly.n()) {
        throw std::invalid_argument("distribution list length " + std::to_string(dists.size()) +
                                    " does not match variable count " + std::to_string(poly.n()));
    }
}

void check_expansion_cap(std::size_t edge_count, int k) {
    double cost = std::pow(static_cast<double>(std::max<std::size_t>(edge_count, 1)), k);
    if (cost > kExpansionCap) {
        throw CapExceeded("edge expansion needs |H|^k = " + std::to_string(cost) + " > cap");
    }
}

template <typename T>
T scalar_from_rat(const Rat& r) {
    if constexpr (std::is_same_v<T, Rat>) {
        return r;
    } else {
        return to_double(r);
    }
}

// Per-vertex tables raw[v][i] = E[Y_v^i] for i <= max_order.
template <typename T>
std::vector<std::vector<T>> raw_moment_tables(const std::vector<DistributionSpec>& dists, int max_order) {
    std::vector<std::vector<T>> tables(dists.size());
    for (std::size_t v = 0; v < dists.size(); ++v) {
        tables[v].resize(max_order + 1);
        for (int i = 0; i <= max_order; ++i) tables[v][i] = scalar_from_rat<T>(raw_moment_rat(dists[v], i));
    }
    return tables;
}

// Tables for the centered variables X_v = Y_v - EY_v:
// E[X^d] = sum_j C(d,j) E[Y^j] (-EY)^{d-j}.
template <typename T>
std::vector<std::vector<T>> centered_moment_tables(const std::vector<DistributionSpec>& dists, int max_order) {
    std::vector<std::vector<T>> tables(dists.size());
    for (std::size_t v = 0; v < dists.size(); ++v) {
        Rat m = mean_rat(dists[v]);
        tables[v].resize(max_order + 1);
        for (int d = 0; d <= max_order; ++d) {
            Rat acc(0);
            for (int j = 0; j <= d; ++j) {
                acc += Rat(binomial(d, j)) * raw_moment_rat(dists[v], j) * rat_pow(-m, d - j);
            }
            tables[v][d] = scalar_from_rat<T>(acc);
        }
    }
    return tables;
}

template <typename T>
struct FlatTerms {
    std::vector<std::vector<int>> verts;
    std::vector<T> weights;
    std::vector<int> touched;  // distinct vertices across all edges
};

template <typename T>
FlatTerms<T> flatten(const MultilinearPolynomial& poly) {
    FlatTerms<T> flat;
    std::vector<char> seen(poly.n() + 1, 0);
    for (const auto& [edge, w] : poly.terms()) {
        flat.verts.push_back(edge.vertices());
        flat.weights.push_back(scalar_from_rat<T>(w));
        for (int v : edge.vertices()) {
            if (!seen[v]) {
                seen[v] = 1;
                flat.touched.push_back(v);
            }
        }
    }
    return flat;
}

// Sum over multisets of k edges. Ordered tuples sharing a multiset have the
// same value, so each multiset is weighted by the multinomial k!/prod m_e!.
template <typename T>
class ExpansionSum {
public:
    ExpansionSum(const FlatTerms<T>& flat, const std::vector<std::vector<T>>& raw, int n, int k)
        : flat_(flat), raw_(raw), degree_(n + 1, 0), k_(k), k_factorial_(factorial(k)) {}

    T run() {
        recurse(0, k_, unit(), BigInt(1));
        return total_;
    }

private:
    static T unit() {
        if constexpr (std::is_same_v<T, Rat>) {
            return Rat(1);
        } else {
            return 1.0;
        }
    }

    void recurse(std::size_t edge, int remaining, T weight_prod, BigInt mult_denominator) {
        if (edge == flat_.verts.size()) {
            if (remaining != 0) return;
            T term = weight_prod;
            BigInt coeff = k_factorial_ / mult_denominator;  // exact multinomial
            term *= scalar_from_rat<T>(Rat(coeff));
            for (int v : flat_.touched) {
                if (degree_[v] > 0) term *= raw_[v - 1][degree_[v]];
            }
            total_ += term;
            return;
        }
        // multiplicity 0 first, without touching the degree vector
        recurse(edge + 1, remaining, weight_prod, mult_denominator);
        T wp = weight_prod;
        BigInt denom = mult_denominator;
        for (int m = 1; m <= remaining; ++m) {
            wp *= flat_.weights[edge];
            denom *= m;
            for (int v : flat_.verts[edge]) ++degree_[v];
            recurse(edge + 1, remaining - m, wp, denom);
        }
        for (int v : flat_.verts[edge]) degree_[v] -= remaining;
    }

    const FlatTerms<T>& flat_;
    const std::vector<std::vector<T>>& raw_;
    std::vector<int> degree_;
    int k_;
    BigInt k_factorial_;
    T total_{};
};

template <typename T>
T expansion_moment(const MultilinearPolynomial& poly, const std::vector<std::vector<T>>& raw, int k) {
    if (k < 1) throw std::invalid_argument("moment order must be >= 1");
    check_expansion_cap(poly.term_count(), k);
    FlatTerms<T> flat = flatten<T>(poly);
    ExpansionSum<T> sum(flat, raw, poly.n(), k);
    return sum.run();
}

template <typename T>
T joint_bruteforce_impl(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int k,
                        bool centered) {
    check_dimensions(poly, dists);
    if (k < 1) throw std::invalid_argument("moment order must be >= 1");
    double cost = 1.0;
    for (const auto& d : dists) {
        if (!d.finite_support()) {
            throw std::invalid_argument("joint enumeration requires finite supports; got " + d.describe());
        }
        cost *= static_cast<double>(d.support_size());
        if (cost > kJointCap) throw CapExceeded("joint outcome count exceeds cap");
    }

    std::vector<std::vector<std::pair<T, T>>> points(dists.size());  // (value, prob)
    for (std::size_t v = 0; v < dists.size(); ++v) {
        std::vector<std::pair<Rat, Rat>> pts;
        switch (dists[v].kind) {
            case DistKind::Discrete:
                pts = dists[v].support;
                break;
            case DistKind::Bernoulli:
                pts = {{Rat(0), Rat(1) - dists[v].p}, {Rat(1), dists[v].p}};
                break;
            case DistKind::Rademacher:
                pts = {{Rat(-1), Rat(1, 2)}, {Rat(1), Rat(1, 2)}};
                break;
            default:
                throw std::logic_error("unreachable");
        }
        for (const auto& [x, prob] : pts) {
            points[v].emplace_back(scalar_from_rat<T>(x), scalar_from_rat<T>(prob));
        }
    }

    T shift = centered ? scalar_from_rat<T>(exact_mean_rat(poly, dists)) : T{};
    FlatTerms<T> flat = flatten<T>(poly);

    std::vector<std::size_t> index(dists.size(), 0);
    std::vector<T> value(dists.size());
    T total{};
    while (true) {
        T prob = scalar_from_rat<T>(Rat(1));
        for (std::size_t v = 0; v < dists.size(); ++v) {
            value[v] = points[v][index[v]].first;
            prob *= points[v][index[v]].second;
        }
        T f{};
        for (std::size_t e = 0; e < flat.verts.size(); ++e) {
            T term = flat.weights[e];
            for (int v : flat.verts[e]) term *= value[v - 1];
            f += term;
        }
        T dev = f - shift;
        T power = scalar_from_rat<T>(Rat(1));
        for (int j = 0; j < k; ++j) power *= dev;
        total += prob * power;

        std::size_t pos = 0;
        while (pos < index.size() && ++index[pos] == points[pos].size()) {
            index[pos] = 0;
            ++pos;
        }
        if (pos == index.size()) break;
        if (index.empty()) break;
    }
    return total;
}

template <typename T>
T covariance_impl(const MultilinearPolynomial& g1, const MultilinearPolynomial& g2,
                  const std::vector<DistributionSpec>& dists) {
    check_dimensions(g1, dists);
    check_dimensions(g2, dists);
    double cost = static_cast<double>(std::max<std::size_t>(g1.term_count(), 1)) *
                  static_cast<double>(std::max<std::size_t>(g2.term_count(), 1));
    if (cost > kExpansionCap) throw CapExceeded("covariance pair count exceeds cap");

    auto raw = raw_moment_tables<T>(dists, 2);
    T total{};
    for (const auto& [e1, w1] : g1.terms()) {
        for (const auto& [e2, w2] : g2.terms()) {
            T term = scalar_from_rat<T>(w1) * scalar_from_rat<T>(w2);
            // degrees are 2 on the intersection, 1 on the symmetric difference
            for (int v : e1.vertices()) term *= raw[v - 1][e2.contains(v) ? 2 : 1];
            for (int v : e2.vertices()) {
                if (!e1.contains(v)) term *= raw[v - 1][1];
            }
            total += term;
        }
    }
    return total;
}

MultilinearPolynomial centered_without_constant(const MultilinearPolynomial& poly,
                                                const std::vector<DistributionSpec>& dists) {
    MultilinearPolynomial centered = center(poly, means_rat(dists));
    MultilinearPolynomial out(centered.n(),
                              centered.power_explicit() ? std::optional<int>(centered.power()) : std::nullopt);
    for (const auto& [edge, w] : centered.terms()) {
        if (!edge.empty()) out.add_term(edge, w);
    }
    return out;
}

}  // namespace

std::vector<Rat> means_rat(const std::vector<DistributionSpec>& dists) {
    std::vector<Rat> means;
    means.reserve(dists.size());
    for (const auto& d : dists) means.push_back(mean_rat(d));
    return means;
}

Rat exact_mean_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists) {
    check_dimensions(poly, dists);
    auto means = means_rat(dists);
    Rat total(0);
    for (const auto& [edge, w] : poly.terms()) {
        Rat term = w;
        for (int v : edge.vertices()) term *= means[v - 1];
        total += term;
    }
    return total;
}

double exact_mean(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists) {
    return to_double(exact_mean_rat(poly, dists));
}

Rat exact_variance_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists) {
    check_dimensions(poly, dists);
    MultilinearPolynomial centered = center(poly, means_rat(dists));
    std::vector<Rat> second_central(dists.size());
    for (std::size_t v = 0; v < dists.size(); ++v) {
        Rat m = mean_rat(dists[v]);
        second_central[v] = raw_moment_rat(dists[v], 2) - m * m;
    }
    Rat total(0);
    for (const auto& [edge, w] : centered.terms()) {
        if (edge.empty()) continue;
        Rat term = w * w;
        for (int v : edge.vertices()) term *= second_central[v - 1];
        total += term;
    }
    return total;
}

double exact_variance(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists) {
    return to_double(exact_variance_rat(poly, dists));
}

Rat exact_moment_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int k) {
    check_dimensions(poly, dists);
    auto raw = raw_moment_tables<Rat>(dists, k);
    return expansion_moment<Rat>(poly, raw, k);
}

double exact_moment(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists, int k) {
    check_dimensions(poly, dists);
    auto raw = raw_moment_tables<double>(dists, k);
    return expansion_moment<double>(poly, raw, k);
}

Rat exact_central_even_moment_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                                  int k) {
    check_dimensions(poly, dists);
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("central moment order must be even and >= 2");
    MultilinearPolynomial centered = centered_without_constant(poly, dists);
    auto tables = centered_moment_tables<Rat>(dists, k);
    return expansion_moment<Rat>(centered, tables, k);
}

double exact_central_even_moment(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                                 int k) {
    check_dimensions(poly, dists);
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("central moment order must be even and >= 2");
    MultilinearPolynomial centered = centered_without_constant(poly, dists);
    auto tables = centered_moment_tables<double>(dists, k);
    return std::max(0.0, expansion_moment<double>(centered, tables, k));
}

Rat joint_bruteforce_moment_rat(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                                int k, bool centered) {
    return joint_bruteforce_impl<Rat>(poly, dists, k, centered);
}

double joint_bruteforce_moment(const MultilinearPolynomial& poly, const std::vector<DistributionSpec>& dists,
                               int k, bool centered) {
    return joint_bruteforce_impl<double>(poly, dists, k, centered);
}

Rat covariance_rat(const MultilinearPolynomial& g1, const MultilinearPolynomial& g2,
                   const std::vector<DistributionSpec>& dists) {
    return covariance_impl<Rat>(g1, g2, dists);
}

double covariance(const MultilinearPolynomial& g1, const MultilinearPolynomial& g2,
                  const std::vector<DistributionSpec>& dists) {
    return covariance_impl<double>(g1, g2, dists);
}

}  // namespace polybound

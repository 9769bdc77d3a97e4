#include "polybound/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "polybound/errors.hpp"
#include "polybound/rational.hpp"

namespace polybound {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace

std::vector<int> LabeledHypergraph::degrees() const {
    std::vector<int> deg(vertex_count, 0);
    for (const auto& edge : edges) {
        for (int v : edge) ++deg[v - 1];
    }
    return deg;
}

int LabeledHypergraph::min_degree() const {
    auto deg = degrees();
    return deg.empty() ? 0 : *std::min_element(deg.begin(), deg.end());
}

Components connected_components(const LabeledHypergraph& g) {
    Components result;
    result.component_of.assign(g.vertex_count, -1);
    if (g.vertex_count == 0) return result;
    UnionFind uf(g.vertex_count);
    std::vector<char> covered(g.vertex_count, 0);
    for (const auto& edge : g.edges) {
        for (std::size_t i = 0; i < edge.size(); ++i) {
            covered[edge[i] - 1] = 1;
            if (i > 0) uf.unite(edge[i] - 1, edge[0] - 1);
        }
    }
    std::vector<int> label(g.vertex_count, -1);
    for (int v = 0; v < g.vertex_count; ++v) {
        if (!covered[v]) continue;
        int root = uf.find(v);
        if (label[root] < 0) label[root] = result.count++;
        result.component_of[v] = label[root];
    }
    return result;
}

namespace {

bool edges_intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

// Line graph adjacency: one node per edge, connected iff vertex sets meet.
std::vector<std::vector<int>> line_graph(const LabeledHypergraph& g) {
    int k = g.edge_count();
    std::vector<std::vector<int>> adj(k);
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            if (edges_intersect(g.edges[i], g.edges[j])) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }
    return adj;
}

}  // namespace

CanonicalOrdering canonical_orderings(const LabeledHypergraph& g) {
    const int k = g.edge_count();
    if (k == 0) return CanonicalOrdering{};
    if (g.min_degree() < 2) {
        throw std::invalid_argument("canonical orderings require minimum vertex degree 2");
    }

    auto adj = line_graph(g);

    // BFS spanning forest, lowest index first for determinism.
    std::vector<std::vector<int>> forest(k);
    std::vector<int> forest_component(k, -1);
    int component_count = 0;
    for (int start = 0; start < k; ++start) {
        if (forest_component[start] >= 0) continue;
        int comp = component_count++;
        std::vector<int> queue{start};
        forest_component[start] = comp;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            int cur = queue[head];
            for (int nb : adj[cur]) {
                if (forest_component[nb] >= 0) continue;
                forest_component[nb] = comp;
                forest[cur].push_back(nb);
                forest[nb].push_back(cur);
                queue.push_back(nb);
            }
        }
    }
    const int c = component_count;

    // Two leaves per forest component: lowest-index leaf goes to s2, the
    // next one to s1. Vertex degrees >= 2 force >= 2 edges per component.
    std::vector<int> forest_degree(k);
    for (int i = 0; i < k; ++i) forest_degree[i] = static_cast<int>(forest[i].size());
    std::vector<int> s1(c, -1), s2(c, -1);
    for (int i = 0; i < k; ++i) {
        if (forest_degree[i] > 1) continue;
        int comp = forest_component[i];
        if (s2[comp] < 0) {
            s2[comp] = i;
        } else if (s1[comp] < 0) {
            s1[comp] = i;
        }
    }
    for (int comp = 0; comp < c; ++comp) {
        if (s1[comp] < 0 || s2[comp] < 0) {
            throw std::logic_error("forest component with fewer than two leaves");
        }
    }

    std::vector<char> in_s1(k, 0), in_s2(k, 0);
    for (int e : s1) in_s1[e] = 1;
    for (int e : s2) in_s2[e] = 1;

    // Peel leaves of the shrinking forest under the phase constraints:
    // first_set in slots 1..c, free edges in c+1..k-c, last_set at the end.
    auto peel = [&](const std::vector<char>& first_set, const std::vector<char>& last_set) {
        std::vector<int> degree = forest_degree;
        std::vector<char> removed(k, 0);
        std::vector<int> order;
        order.reserve(k);
        for (int step = 1; step <= k; ++step) {
            int pick = -1;
            for (int i = 0; i < k; ++i) {
                if (removed[i] || degree[i] > 1) continue;
                bool eligible;
                if (step <= c) {
                    eligible = first_set[i];
                } else if (step <= k - c) {
                    eligible = !first_set[i] && !last_set[i];
                } else {
                    eligible = last_set[i];
                }
                if (eligible) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) throw std::logic_error("no eligible leaf during canonical peeling");
            removed[pick] = 1;
            for (int nb : forest[pick]) {
                if (!removed[nb]) --degree[nb];
            }
            order.push_back(pick);
        }
        return order;
    };

    CanonicalOrdering co;
    co.order1 = peel(in_s2, in_s1);
    co.order2 = peel(in_s1, in_s2);
    co.s1 = s1;
    co.s2 = s2;
    std::sort(co.s1.begin(), co.s1.end());
    std::sort(co.s2.begin(), co.s2.end());
    return co;
}

bool verify_ordering(const LabeledHypergraph& g, const CanonicalOrdering& co) {
    const int k = g.edge_count();
    const int c = connected_components(g).count;
    if (static_cast<int>(co.order1.size()) != k || static_cast<int>(co.order2.size()) != k) return false;
    if (static_cast<int>(co.s1.size()) != c || static_cast<int>(co.s2.size()) != c) return false;

    auto is_permutation = [&](const std::vector<int>& order) {
        std::vector<char> seen(k, 0);
        for (int e : order) {
            if (e < 0 || e >= k || seen[e]) return false;
            seen[e] = 1;
        }
        return true;
    };
    if (!is_permutation(co.order1) || !is_permutation(co.order2)) return false;

    auto sorted_slice = [](const std::vector<int>& order, int from, int len) {
        std::vector<int> out(order.begin() + from, order.begin() + from + len);
        std::sort(out.begin(), out.end());
        return out;
    };
    if (sorted_slice(co.order1, 0, c) != co.s2) return false;
    if (sorted_slice(co.order1, k - c, c) != co.s1) return false;
    if (sorted_slice(co.order2, 0, c) != co.s1) return false;
    if (sorted_slice(co.order2, k - c, c) != co.s2) return false;

    std::vector<int> overlap;
    std::set_intersection(co.s1.begin(), co.s1.end(), co.s2.begin(), co.s2.end(), std::back_inserter(overlap));
    if (!overlap.empty()) return false;

    // one edge of each special set per component
    auto comps = connected_components(g);
    auto one_per_component = [&](const std::vector<int>& set) {
        std::vector<char> hit(c, 0);
        for (int e : set) {
            int comp = comps.component_of[g.edges[e][0] - 1];
            if (comp < 0 || hit[comp]) return false;
            hit[comp] = 1;
        }
        return true;
    };
    if (c > 0 && (!one_per_component(co.s1) || !one_per_component(co.s2))) return false;

    // suffixes keep exactly c components
    auto suffix_ok = [&](const std::vector<int>& order) {
        for (int s = 0; s < k - c; ++s) {  // 0-based: suffix starting at slot s+1
            LabeledHypergraph sub;
            sub.vertex_count = g.vertex_count;
            for (int i = s; i < k; ++i) sub.edges.push_back(g.edges[order[i]]);
            if (connected_components(sub).count != c) return false;
        }
        return true;
    };
    return suffix_ok(co.order1) && suffix_ok(co.order2);
}

namespace {

void check_case(const CountingCase& c) {
    if (c.vertices < 0 || c.k < 1 || c.q < 1) throw std::invalid_argument("counting case needs l >= 0, k, q >= 1");
    if (static_cast<int>(c.degrees.size()) != c.vertices) {
        throw std::invalid_argument("degree vector length must equal the vertex count");
    }
    long long degree_sum = 0;
    for (int d : c.degrees) {
        if (d < 2) throw std::invalid_argument("all degrees must be >= 2");
        degree_sum += d;
    }
    if (degree_sum != static_cast<long long>(c.q) * c.k) {
        throw std::invalid_argument("degree sum " + std::to_string(degree_sum) + " != q*k = " +
                                    std::to_string(static_cast<long long>(c.q) * c.k));
    }
}

std::vector<std::vector<int>> all_q_subsets(int l, int q) {
    std::vector<std::vector<int>> subsets;
    if (q > l) return subsets;
    std::vector<int> cur(q);
    for (int i = 0; i < q; ++i) cur[i] = i + 1;
    while (true) {
        subsets.push_back(cur);
        int pos = q - 1;
        while (pos >= 0 && cur[pos] == l - q + pos + 1) --pos;
        if (pos < 0) break;
        ++cur[pos];
        for (int i = pos + 1; i < q; ++i) cur[i] = cur[i - 1] + 1;
    }
    return subsets;
}

void check_enumeration_cap(std::size_t subset_count, int k) {
    double cost = std::pow(static_cast<double>(std::max<std::size_t>(subset_count, 1)), k);
    if (cost > kEnumerationCap) throw CapExceeded("enumeration of " + std::to_string(cost) + " sequences exceeds cap");
}

}  // namespace

long long enumerate_labeled(const CountingCase& c, std::vector<LabeledHypergraph>* witnesses) {
    check_case(c);
    auto subsets = all_q_subsets(c.vertices, c.q);
    if (subsets.empty()) return 0;
    check_enumeration_cap(subsets.size(), c.k);

    long long count = 0;
    std::vector<std::size_t> choice(c.k, 0);
    while (true) {
        std::vector<int> deg(c.vertices, 0);
        for (std::size_t slot = 0; slot < choice.size(); ++slot) {
            for (int v : subsets[choice[slot]]) ++deg[v - 1];
        }
        if (std::equal(deg.begin(), deg.end(), c.degrees.begin())) {
            LabeledHypergraph g;
            g.vertex_count = c.vertices;
            for (std::size_t slot = 0; slot < choice.size(); ++slot) g.edges.push_back(subsets[choice[slot]]);
            if (connected_components(g).count == c.components) {
                ++count;
                if (witnesses) witnesses->push_back(std::move(g));
            }
        }
        std::size_t pos = 0;
        while (pos < choice.size() && ++choice[pos] == subsets.size()) {
            choice[pos] = 0;
            ++pos;
        }
        if (pos == choice.size()) break;
    }
    return count;
}

namespace {

long long backtrack_count(const std::vector<std::vector<int>>& subsets, const CountingCase& c,
                          std::vector<int>& remaining, int slot, LabeledHypergraph& partial) {
    if (slot == c.k) {
        for (int r : remaining) {
            if (r != 0) return 0;
        }
        return connected_components(partial).count == c.components ? 1 : 0;
    }
    long long total = 0;
    int slots_left = c.k - slot;
    for (const auto& subset : subsets) {
        bool feasible = true;
        for (int v : subset) {
            if (remaining[v - 1] == 0) {
                feasible = false;
                break;
            }
        }
        if (!feasible) continue;
        for (int v : subset) --remaining[v - 1];
        // each remaining slot can serve a vertex at most once
        for (int v = 0; v < c.vertices && feasible; ++v) {
            if (remaining[v] > slots_left - 1) feasible = false;
        }
        if (feasible) {
            partial.edges.push_back(subset);
            total += backtrack_count(subsets, c, remaining, slot + 1, partial);
            partial.edges.pop_back();
        }
        for (int v : subset) ++remaining[v - 1];
    }
    return total;
}

}  // namespace

long long enumerate_labeled_backtracking(const CountingCase& c) {
    check_case(c);
    auto subsets = all_q_subsets(c.vertices, c.q);
    if (subsets.empty()) return 0;
    check_enumeration_cap(subsets.size(), c.k);
    std::vector<int> remaining = c.degrees;
    LabeledHypergraph partial;
    partial.vertex_count = c.vertices;
    return backtrack_count(subsets, c, remaining, 0, partial);
}

double counting_min_r0(const CountingCase& c, long long count) {
    if (count < 0) throw std::invalid_argument("negative count");
    if (count == 0) return 0.0;
    // count * prod d_v! <= r0^{qk} * k^{qk-(q-1)c}
    double log_lhs = std::log(static_cast<double>(count));
    for (int d : c.degrees) log_lhs += std::lgamma(d + 1.0);
    double exponent = static_cast<double>(c.q) * c.k - static_cast<double>(c.q - 1) * c.components;
    double log_rhs_k = exponent * std::log(static_cast<double>(c.k));
    double qk = static_cast<double>(c.q) * c.k;
    return std::exp((log_lhs - log_rhs_k) / qk);
}

namespace {

// Weak compositions of total into parts entries, lexicographic.
bool next_weak_composition(std::vector<int>& v, int total) {
    std::size_t pos = 0;
    while (pos < v.size()) {
        if (++v[pos] <= total) return true;
        v[pos] = 0;
        ++pos;
    }
    return false;
}

}  // namespace

std::vector<SweepEntry> counting_sweep(int max_qk) {
    std::vector<SweepEntry> entries;
    for (int q = 1; q <= max_qk / 2; ++q) {
        for (int k = 2; q * k <= max_qk; ++k) {
            const int qk = q * k;
            for (int l = q; 2 * l <= qk; ++l) {
                const int excess = qk - 2 * l;
                std::vector<int> comp(l, 0);
                // degree vectors are 2 + (a weak composition of the excess)
                while (true) {
                    if (std::accumulate(comp.begin(), comp.end(), 0) == excess) {
                        std::vector<int> degrees(l);
                        for (int i = 0; i < l; ++i) degrees[i] = 2 + comp[i];
                        // a component needs >= q vertices and >= 2 edges
                        int max_components = std::min(l / q, k / 2);
                        for (int comp_count = 1; comp_count <= std::max(1, max_components); ++comp_count) {
                            CountingCase cc{l, k, q, degrees, comp_count};
                            SweepEntry entry;
                            entry.c = cc;
                            entry.count = enumerate_labeled(cc);
                            entry.min_r0 = counting_min_r0(cc, entry.count);
                            entries.push_back(std::move(entry));
                        }
                    }
                    if (excess == 0 || !next_weak_composition(comp, excess)) break;
                }
            }
        }
    }
    return entries;
}

}  // namespace polybound

#pragma once

#include <vector>

namespace polybound {

// Hypergraph with labeled vertices [1..vertex_count] and an ordered sequence
// of labeled hyperedges. Duplicate vertex sets are first-class: two edges on
// the same vertices are distinct edges.
struct LabeledHypergraph {
    int vertex_count = 0;
    std::vector<std::vector<int>> edges;  // each sorted, values in [1..vertex_count]

    int edge_count() const { return static_cast<int>(edges.size()); }
    std::vector<int> degrees() const;  // indexed 0..vertex_count-1
    int min_degree() const;
};

struct Components {
    int count = 0;
    // component id per vertex (0-based), -1 for vertices in no edge
    std::vector<int> component_of;
};

// Maximal vertex partition with no edge crossing parts (union-find over the
// edges' vertex sets). Vertices outside every edge are not counted.
Components connected_components(const LabeledHypergraph& g);

// Two edge orderings with the prefix/suffix structure used to peel
// hyperedges one at a time while preserving the component count:
//   - s2 fills the first c slots of order1 and the last c of order2,
//     s1 the reverse;
//   - every suffix of length >= c+ ... (verified by verify_ordering) keeps
//     exactly c components.
struct CanonicalOrdering {
    std::vector<int> order1, order2;  // permutations of edge indices 0..k-1
    std::vector<int> s1, s2;          // sorted edge-index sets, one per component
};

// Builds the orderings by taking a spanning forest of the edge-intersection
// (line) graph, choosing two leaves per forest component, and repeatedly
// removing constraint-eligible leaves. Lowest edge index breaks every tie.
// Requires minimum vertex degree 2.
CanonicalOrdering canonical_orderings(const LabeledHypergraph& g);

bool verify_ordering(const LabeledHypergraph& g, const CanonicalOrdering& co);

// Parameters of one counting case: sequences of k q-subsets of [vertices]
// with the given degree vector and component count.
struct CountingCase {
    int vertices = 0;  // l
    int k = 0;
    int q = 0;
    std::vector<int> degrees;  // one entry per vertex, each >= 2, sum = q*k
    int components = 0;
};

inline constexpr double kEnumerationCap = 1e7;  // C(l,q)^k

// Exhaustive count over all C(l,q)^k edge sequences.
// Optionally collects the witnesses.
long long enumerate_labeled(const CountingCase& c, std::vector<LabeledHypergraph>* witnesses = nullptr);

// Independent oracle: places edges one slot at a time, pruning on the
// remaining degree demand.
long long enumerate_labeled_backtracking(const CountingCase& c);

// Smallest r0 with count * prod(d_v!) <= r0^{qk} * k^{qk-(q-1)c}.
// Zero when the count is zero.
double counting_min_r0(const CountingCase& c, long long count);

struct SweepEntry {
    CountingCase c;
    long long count = 0;
    double min_r0 = 0.0;
};

// All feasible cases with q*k <= max_qk, counted with both enumerators
// (they are required to agree). Also used to fit the counting constant.
std::vector<SweepEntry> counting_sweep(int max_qk);

}  // namespace polybound

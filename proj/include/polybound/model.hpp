#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "polybound/rational.hpp"

namespace polybound {

// A monomial's variable set. Stored sorted so vertex-set equality is plain
// comparison. The empty edge is legal and carries the constant term.
class Hyperedge {
public:
    Hyperedge() = default;

    // Sorts and rejects repeated or non-positive vertices.
    static Hyperedge checked(std::vector<int> vertices);
    // Keeps the list as given; validate() reports the problems.
    static Hyperedge raw(std::vector<int> vertices);

    const std::vector<int>& vertices() const { return vertices_; }
    int size() const { return static_cast<int>(vertices_.size()); }
    bool empty() const { return vertices_.empty(); }
    bool contains(int v) const;
    bool well_formed() const;  // strictly increasing, all >= 1
    std::string label() const;  // "{1,2,3}" for diagnostics

    friend auto operator<=>(const Hyperedge&, const Hyperedge&) = default;

private:
    std::vector<int> vertices_;
};

// f(x) = sum_h w_h * prod_{v in h} x_v as a weighted hypergraph.
// Weights are exact rationals; JSON numbers convert losslessly.
class MultilinearPolynomial {
public:
    MultilinearPolynomial() = default;
    explicit MultilinearPolynomial(int n, std::optional<int> power = std::nullopt);

    // Merges coefficients on equal vertex sets and prunes exact zeros.
    // Grows the power to fit unless it was set explicitly.
    void add_term(const Hyperedge& edge, const Rat& weight);
    // No checks and no merging; for loaders and validation tests.
    void set_term_raw(const Hyperedge& edge, const Rat& weight);

    int n() const { return n_; }
    int power() const { return power_; }
    bool power_explicit() const { return power_explicit_; }
    const std::map<Hyperedge, Rat>& terms() const { return terms_; }
    Rat coefficient(const Hyperedge& edge) const;
    std::size_t term_count() const { return terms_.size(); }

    static MultilinearPolynomial from_json(const nlohmann::json& j);  // throws SchemaError
    nlohmann::json to_json() const;

private:
    int n_ = 0;
    int power_ = 0;
    bool power_explicit_ = false;
    std::map<Hyperedge, Rat> terms_;
};

using VariableAssignment = std::vector<double>;

// Empty result iff every type invariant holds; each entry names the problem.
std::vector<std::string> validate(const MultilinearPolynomial& poly);

double evaluate(const MultilinearPolynomial& poly, const VariableAssignment& x);
Rat evaluate_rat(const MultilinearPolynomial& poly, const std::vector<Rat>& x);

// Rewrites f in terms of x_v - means[v]: the returned polynomial g satisfies
// g(x - means) = f(x) pointwise. Its empty-edge weight is f's expectation
// when means are the variable means.
MultilinearPolynomial center(const MultilinearPolynomial& poly, const std::vector<Rat>& means);

struct SignedPart {
    MultilinearPolynomial part;
    int size = 0;  // common cardinality of the edges in this part
    int sign = 0;  // +1 or -1
};

// Groups the non-constant monomials by (cardinality, weight sign). The parts
// plus the constant term reconstruct the input exactly.
std::vector<SignedPart> split_by_sign_and_size(const MultilinearPolynomial& poly);

}  // namespace polybound

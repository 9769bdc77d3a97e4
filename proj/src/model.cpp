#include "polybound/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "polybound/errors.hpp"

namespace polybound {

Hyperedge Hyperedge::checked(std::vector<int> vertices) {
    std::sort(vertices.begin(), vertices.end());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] < 1) throw std::invalid_argument("hyperedge vertex indices must be >= 1");
        if (i > 0 && vertices[i] == vertices[i - 1]) {
            throw std::invalid_argument("hyperedge repeats vertex " + std::to_string(vertices[i]));
        }
    }
    Hyperedge e;
    e.vertices_ = std::move(vertices);
    return e;
}

Hyperedge Hyperedge::raw(std::vector<int> vertices) {
    Hyperedge e;
    e.vertices_ = std::move(vertices);
    return e;
}

bool Hyperedge::contains(int v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Hyperedge::well_formed() const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i] < 1) return false;
        if (i > 0 && vertices_[i] <= vertices_[i - 1]) return false;
    }
    return true;
}

std::string Hyperedge::label() const {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (i) out << ',';
        out << vertices_[i];
    }
    out << '}';
    return out.str();
}

MultilinearPolynomial::MultilinearPolynomial(int n, std::optional<int> power)
    : n_(n), power_(power.value_or(0)), power_explicit_(power.has_value()) {
    if (n < 0) throw std::invalid_argument("variable count must be >= 0");
    if (power_ < 0) throw std::invalid_argument("power must be >= 0");
}

void MultilinearPolynomial::add_term(const Hyperedge& edge, const Rat& weight) {
    if (!edge.well_formed()) throw std::invalid_argument("malformed hyperedge " + edge.label());
    if (!edge.empty() && edge.vertices().back() > n_) {
        throw std::invalid_argument("hyperedge " + edge.label() + " exceeds variable count " + std::to_string(n_));
    }
    if (edge.size() > power_) {
        if (power_explicit_) {
            throw std::invalid_argument("hyperedge " + edge.label() + " exceeds declared power " +
                                        std::to_string(power_));
        }
        power_ = edge.size();
    }
    auto it = terms_.find(edge);
    if (it == terms_.end()) {
        if (weight != 0) terms_.emplace(edge, weight);
        return;
    }
    it->second += weight;
    if (it->second == 0) terms_.erase(it);
}

void MultilinearPolynomial::set_term_raw(const Hyperedge& edge, const Rat& weight) {
    if (!power_explicit_) power_ = std::max(power_, edge.size());
    terms_[edge] = weight;
}

Rat MultilinearPolynomial::coefficient(const Hyperedge& edge) const {
    auto it = terms_.find(edge);
    return it == terms_.end() ? Rat(0) : it->second;
}

namespace {

Rat weight_from_json(const nlohmann::json& w) {
    if (w.is_string()) return parse_rat(w.get<std::string>());
    if (w.is_number_integer()) return Rat(w.get<long long>());
    if (w.is_number_float()) return rat_from_double(w.get<double>());
    throw SchemaError("weight must be a number or a rational string");
}

}  // namespace

MultilinearPolynomial MultilinearPolynomial::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SchemaError("polynomial: expected an object");
    if (!j.contains("n") || !j["n"].is_number_integer()) throw SchemaError("polynomial: missing integer field \"n\"");
    int n = j["n"].get<int>();
    if (n < 0) throw SchemaError("polynomial: \"n\" must be >= 0");

    std::optional<int> power;
    if (j.contains("power")) {
        if (!j["power"].is_number_integer()) throw SchemaError("polynomial: \"power\" must be an integer");
        power = j["power"].get<int>();
        if (*power < 0) throw SchemaError("polynomial: \"power\" must be >= 0");
    }

    MultilinearPolynomial poly(n, power);
    std::set<std::vector<int>> seen;
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw SchemaError("polynomial: \"edges\" must be an array");
        for (const auto& ej : j["edges"]) {
            if (!ej.is_object() || !ej.contains("vertices") || !ej.contains("weight")) {
                throw SchemaError("polynomial: each edge needs \"vertices\" and \"weight\"");
            }
            std::vector<int> verts;
            for (const auto& vj : ej["vertices"]) {
                if (!vj.is_number_integer()) throw SchemaError("polynomial: vertices must be integers");
                verts.push_back(vj.get<int>());
            }
            std::vector<int> key = verts;
            std::sort(key.begin(), key.end());
            bool clean = true;
            for (std::size_t i = 0; i < key.size(); ++i) {
                if (key[i] < 1 || (i > 0 && key[i] == key[i - 1])) clean = false;
            }
            // Vertex order in the file is free; a clean list is stored in
            // canonical order, a broken one is kept raw so validate() can
            // name the exact problem.
            Hyperedge edge = clean ? Hyperedge::raw(key) : Hyperedge::raw(verts);
            if (!seen.insert(key).second) {
                throw SchemaError("polynomial: duplicate hyperedge " + edge.label());
            }
            poly.set_term_raw(edge, weight_from_json(ej["weight"]));
        }
    }

    auto problems = validate(poly);
    if (!problems.empty()) throw SchemaError("polynomial: " + problems.front());
    return poly;
}

nlohmann::json MultilinearPolynomial::to_json() const {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [edge, w] : terms_) {
        nlohmann::json ej;
        ej["vertices"] = edge.vertices();
        if (fits_double(w)) {
            ej["weight"] = to_double(w);
        } else {
            ej["weight"] = rat_to_string(w);
        }
        edges.push_back(std::move(ej));
    }
    return nlohmann::json{{"n", n_}, {"power", power_}, {"edges", std::move(edges)}};
}

std::vector<std::string> validate(const MultilinearPolynomial& poly) {
    std::vector<std::string> problems;
    for (const auto& [edge, weight] : poly.terms()) {
        const auto& verts = edge.vertices();
        bool sorted = true;
        for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
            if (verts[i + 1] < verts[i]) sorted = false;
            if (verts[i + 1] == verts[i]) {
                problems.push_back("duplicate vertex " + std::to_string(verts[i]) + " in edge " + edge.label());
            }
        }
        if (!sorted) problems.push_back("edge " + edge.label() + " is not in sorted order");
        for (int v : verts) {
            if (v < 1 || v > poly.n()) {
                problems.push_back("vertex " + std::to_string(v) + " of edge " + edge.label() +
                                   " outside [1.." + std::to_string(poly.n()) + "]");
            }
        }
        if (edge.size() > poly.power()) {
            problems.push_back("edge " + edge.label() + " has size " + std::to_string(edge.size()) +
                               " but power is " + std::to_string(poly.power()));
        }
        if (weight == 0) problems.push_back("zero weight stored for edge " + edge.label());
    }
    return problems;
}

namespace {

template <typename T>
T evaluate_impl(const MultilinearPolynomial& poly, const std::vector<T>& x) {
    if (static_cast<int>(x.size()) != poly.n()) {
        throw std::invalid_argument("assignment length " + std::to_string(x.size()) +
                                    " does not match variable count " + std::to_string(poly.n()));
    }
    T total(0);
    for (const auto& [edge, weight] : poly.terms()) {
        T term;
        if constexpr (std::is_same_v<T, Rat>) {
            term = weight;
        } else {
            term = to_double(weight);
        }
        for (int v : edge.vertices()) term *= x[v - 1];
        total += term;
    }
    return total;
}

}  // namespace

double evaluate(const MultilinearPolynomial& poly, const VariableAssignment& x) {
    return evaluate_impl<double>(poly, x);
}

Rat evaluate_rat(const MultilinearPolynomial& poly, const std::vector<Rat>& x) {
    return evaluate_impl<Rat>(poly, x);
}

MultilinearPolynomial center(const MultilinearPolynomial& poly, const std::vector<Rat>& means) {
    if (static_cast<int>(means.size()) != poly.n()) {
        throw std::invalid_argument("means length does not match variable count");
    }
    MultilinearPolynomial out(poly.n(), poly.power_explicit() ? std::optional<int>(poly.power()) : std::nullopt);
    // w'_{h'} = sum over h containing h' of w_h * prod_{v in h \ h'} means[v],
    // accumulated by walking the 2^|h| sub-edges of each edge.
    for (const auto& [edge, weight] : poly.terms()) {
        const auto& verts = edge.vertices();
        const int m = edge.size();
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
            Rat w = weight;
            std::vector<int> sub;
            for (int i = 0; i < m; ++i) {
                if (mask & (1u << i)) {
                    sub.push_back(verts[i]);
                } else {
                    w *= means[verts[i] - 1];
                }
            }
            if (w != 0) out.add_term(Hyperedge::checked(std::move(sub)), w);
        }
    }
    return out;
}

std::vector<SignedPart> split_by_sign_and_size(const MultilinearPolynomial& poly) {
    std::map<std::pair<int, int>, MultilinearPolynomial> groups;
    for (const auto& [edge, weight] : poly.terms()) {
        if (edge.empty()) continue;  // constant term is reported separately
        int sign = weight > 0 ? 1 : -1;
        auto key = std::make_pair(edge.size(), sign);
        auto it = groups.find(key);
        if (it == groups.end()) {
            it = groups.emplace(key, MultilinearPolynomial(poly.n())).first;
        }
        it->second.add_term(edge, weight);
    }
    std::vector<SignedPart> parts;
    for (auto& [key, part] : groups) {
        parts.push_back(SignedPart{std::move(part), key.first, key.second});
    }
    return parts;
}

}  // namespace polybound

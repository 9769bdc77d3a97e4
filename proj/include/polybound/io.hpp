#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polybound/bounds.hpp"
#include "polybound/distributions.hpp"
#include "polybound/model.hpp"
#include "polybound/montecarlo.hpp"

namespace polybound {

struct AnalysisConfig {
    std::vector<double> lambdas;  // empty: derive a grid from the variance
    long long samples = 100000;
    std::uint64_t seed = 20240809;
    double level = 0.99;
    std::optional<std::string> constants_path;
};

// One problem file: a polynomial, one law per variable, optional manual L
// values, and optional analysis settings.
struct ProblemInstance {
    std::string name;
    MultilinearPolynomial poly;
    std::vector<DistributionSpec> dists;
    std::vector<std::optional<double>> l_overrides;
    AnalysisConfig analysis;
};

ProblemInstance load_problem(const std::string& path);       // throws SchemaError
ProblemInstance parse_problem(const nlohmann::json& j, const std::string& name);

// Sorted list of the corpus problem files (*.json except the constants
// manifest).
std::vector<std::string> corpus_files(const std::string& dir);
std::vector<ProblemInstance> load_corpus(const std::string& dir);

// FNV-1a over the sorted file names and contents.
std::string corpus_hash(const std::string& dir);
std::uint64_t fnv1a64(const std::string& text);

BoundConstants load_constants(const std::string& path);
void save_constants(const std::string& path, const BoundConstants& constants);

// Report rows as CSV (sorted by lambda, dot decimals). When rows carry no
// empirical data the empirical columns are omitted.
std::string report_csv(const std::vector<TailBoundRow>& rows);
nlohmann::json report_json(const std::vector<TailBoundRow>& rows);

std::string format_double(double value);  // shortest round-trip, locale-free

inline const char* kConstantsFileName = "constants.json";

}  // namespace polybound

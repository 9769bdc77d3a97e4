#include "polybound/io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "polybound/errors.hpp"

namespace polybound {

namespace fs = std::filesystem;

namespace {

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("JSON parse error in " + path + ": " + e.what());
    }
}

}  // namespace

ProblemInstance parse_problem(const nlohmann::json& j, const std::string& name) {
    if (!j.is_object()) throw SchemaError(name + ": expected a JSON object");
    if (!j.contains("polynomial")) throw SchemaError(name + ": missing \"polynomial\"");
    ProblemInstance inst;
    inst.name = name;
    inst.poly = MultilinearPolynomial::from_json(j["polynomial"]);

    if (!j.contains("variables") || !j["variables"].is_array()) {
        throw SchemaError(name + ": missing \"variables\" array");
    }
    for (const auto& dj : j["variables"]) inst.dists.push_back(DistributionSpec::from_json(dj));
    if (static_cast<int>(inst.dists.size()) != inst.poly.n()) {
        throw SchemaError(name + ": " + std::to_string(inst.dists.size()) + " variables for a polynomial on " +
                          std::to_string(inst.poly.n()) + " variables");
    }

    if (j.contains("l_overrides")) {
        const auto& lo = j["l_overrides"];
        if (!lo.is_array() || lo.size() != inst.dists.size()) {
            throw SchemaError(name + ": \"l_overrides\" must be an array of length n");
        }
        for (const auto& v : lo) {
            if (v.is_null()) {
                inst.l_overrides.push_back(std::nullopt);
            } else if (v.is_number()) {
                inst.l_overrides.push_back(v.get<double>());
            } else {
                throw SchemaError(name + ": \"l_overrides\" entries must be numbers or null");
            }
        }
    }

    if (j.contains("analysis")) {
        const auto& aj = j["analysis"];
        if (!aj.is_object()) throw SchemaError(name + ": \"analysis\" must be an object");
        if (aj.contains("lambdas")) {
            for (const auto& v : aj["lambdas"]) inst.analysis.lambdas.push_back(v.get<double>());
            for (std::size_t i = 0; i < inst.analysis.lambdas.size(); ++i) {
                if (inst.analysis.lambdas[i] < 0 ||
                    (i > 0 && inst.analysis.lambdas[i] <= inst.analysis.lambdas[i - 1])) {
                    throw SchemaError(name + ": lambda grid must be strictly increasing and nonnegative");
                }
            }
        }
        if (aj.contains("samples")) inst.analysis.samples = aj["samples"].get<long long>();
        if (aj.contains("seed")) inst.analysis.seed = aj["seed"].get<std::uint64_t>();
        if (aj.contains("level")) inst.analysis.level = aj["level"].get<double>();
        if (aj.contains("constants")) inst.analysis.constants_path = aj["constants"].get<std::string>();
        if (inst.analysis.samples < 0) throw SchemaError(name + ": samples must be >= 0");
    }
    return inst;
}

ProblemInstance load_problem(const std::string& path) {
    return parse_problem(read_json_file(path), fs::path(path).filename().string());
}

std::vector<std::string> corpus_files(const std::string& dir) {
    if (!fs::is_directory(dir)) throw SchemaError("not a directory: " + dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto p = entry.path();
        if (p.extension() != ".json") continue;
        if (p.filename() == kConstantsFileName) continue;
        files.push_back(p.string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<ProblemInstance> load_corpus(const std::string& dir) {
    std::vector<ProblemInstance> corpus;
    for (const auto& path : corpus_files(dir)) corpus.push_back(load_problem(path));
    return corpus;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string corpus_hash(const std::string& dir) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& path : corpus_files(dir)) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string name = fs::path(path).filename().string();
        std::string blob = name + '\0' + buf.str();
        for (unsigned char c : blob) {
            h ^= c;
            h *= 1099511628211ull;
        }
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

BoundConstants load_constants(const std::string& path) {
    return BoundConstants::from_json(read_json_file(path));
}

void save_constants(const std::string& path, const BoundConstants& constants) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write file: " + path);
    out << constants.to_json().dump(2) << "\n";
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

std::string report_csv(const std::vector<TailBoundRow>& rows) {
    bool with_empirical = !rows.empty() && rows.front().empirical.has_value();
    std::ostringstream out;
    out << "lambda,main_raw,main_clamped,ss_clamped,hc_clamped,bernstein_var";
    if (with_empirical) out << ",estimate,ci_low,ci_high,violation_flag";
    out << "\n";
    for (const auto& row : rows) {
        out << format_double(row.lambda) << ',' << format_double(row.main.raw) << ','
            << format_double(row.main.clamped) << ',' << format_double(row.ss.clamped) << ','
            << format_double(row.hc.clamped) << ',' << format_double(row.bernstein_var_value);
        if (with_empirical) {
            out << ',' << format_double(row.empirical->estimate) << ',' << format_double(row.empirical->ci_low)
                << ',' << format_double(row.empirical->ci_high) << ',' << (row.violation ? 1 : 0);
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::json report_json(const std::vector<TailBoundRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json rj{{"lambda", row.lambda},
                          {"main_raw", row.main.raw},
                          {"main_clamped", row.main.clamped},
                          {"ss_raw", row.ss.raw},
                          {"ss_clamped", row.ss.clamped},
                          {"hc_raw", row.hc.raw},
                          {"hc_clamped", row.hc.clamped},
                          {"hc_valid", row.hc_valid},
                          {"bernstein_mu", row.bernstein_mu_value},
                          {"bernstein_var", row.bernstein_var_value}};
        if (row.empirical) {
            rj["estimate"] = row.empirical->estimate;
            rj["ci_low"] = row.empirical->ci_low;
            rj["ci_high"] = row.empirical->ci_high;
            rj["hits"] = row.empirical->hits;
            rj["samples"] = row.empirical->samples;
            rj["violation"] = row.violation;
        }
        arr.push_back(std::move(rj));
    }
    return arr;
}

}  // namespace polybound

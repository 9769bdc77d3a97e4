// Command-line front end: ingest problem files, compute smoothness profiles
// and tail/moment bounds, run the property suites, and fit the bound
// constants on a corpus.
//
// Exit codes: 0 success, 1 failed checks or diverged fit, 2 schema or usage
// error, 3 unsupported distribution without a manual L, 4 soundness
// violation in a bounds report.

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "polybound/bounds.hpp"
#include "polybound/combinatorics.hpp"
#include "polybound/errors.hpp"
#include "polybound/gen.hpp"
#include "polybound/io.hpp"
#include "polybound/moments.hpp"
#include "polybound/montecarlo.hpp"
#include "polybound/selfcheck.hpp"
#include "polybound/smoothness.hpp"

namespace pb = polybound;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitSchema = 2;
constexpr int kExitUnsupportedDist = 3;
constexpr int kExitViolation = 4;

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const pb::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const pb::UnsupportedDistribution& e) {
        std::cerr << "error: " << e.what() << " (supply an L override)\n";
        return kExitUnsupportedDist;
    } catch (const pb::FitDivergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const pb::CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

pb::BoundConstants resolve_constants(const std::optional<std::string>& flag_path,
                                     const pb::ProblemInstance* instance) {
    if (flag_path) return pb::load_constants(*flag_path);
    if (instance && instance->analysis.constants_path) {
        return pb::load_constants(*instance->analysis.constants_path);
    }
    if (const char* env = std::getenv("POLYBOUND_CONSTANTS")) return pb::load_constants(env);
    return pb::BoundConstants{};  // all constants 1; pass --constants for fitted values
}

std::string today_iso() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[16];
    std::strftime(buf, sizeof(buf), "%Y-%m-%d", &tm_utc);
    return buf;
}

struct FitData {
    std::vector<pb::MomentFitCase> moment_cases;
    std::vector<pb::TailFitCase> tail_cases;
};

// Shared by `fit` and the acceptance suite: per-instance seeds come from the
// file name so corpus sweeps are reproducible file by file.
FitData collect_fit_data(const std::vector<pb::ProblemInstance>& corpus, long long samples, std::uint64_t seed,
                         double level, int workers) {
    FitData data;
    for (const auto& inst : corpus) {
        auto prof = pb::profile(inst.poly, inst.dists, inst.l_overrides);

        pb::MomentFitCase mc;
        mc.profile = prof;
        for (int k = 2; k <= 6; k += 2) {
            mc.central_even_moments.emplace_back(k, pb::exact_central_even_moment(inst.poly, inst.dists, k));
        }
        data.moment_cases.push_back(std::move(mc));

        pb::TailFitCase tc;
        tc.profile = prof;
        tc.hc_valid = pb::hc_applicable(inst.dists);
        auto lambdas = pb::default_lambda_grid(prof.variance);
        std::uint64_t instance_seed = seed ^ pb::fnv1a64(inst.name);
        auto estimates = pb::empirical_tail(inst.poly, inst.dists, lambdas, samples, instance_seed, level, workers);
        for (const auto& est : estimates) {
            tc.points.push_back(pb::TailFitPoint{est.lambda, est.ci_low});
        }
        data.tail_cases.push_back(std::move(tc));
    }
    return data;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tail and moment bound calculator for multilinear polynomials of independent random variables"};
    app.require_subcommand(1);

    // profile
    std::string profile_file;
    auto* cmd_profile = app.add_subcommand("profile", "print the smoothness profile of a problem file as JSON");
    cmd_profile->add_option("file", profile_file, "problem file (JSON)")->required();

    // bounds
    std::string bounds_file;
    std::vector<double> lambda_grid;
    std::optional<long long> opt_samples;
    std::optional<std::uint64_t> opt_seed;
    std::optional<std::string> opt_constants;
    std::optional<std::string> opt_profile_in;
    std::string format = "csv";
    double level = 0.99;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto* cmd_bounds = app.add_subcommand("bounds", "evaluate every bound against a Monte Carlo tail estimate");
    cmd_bounds->add_option("file", bounds_file, "problem file (JSON)")->required();
    cmd_bounds->add_option("--lambda-grid", lambda_grid, "comma-separated deviation grid")->delimiter(',');
    cmd_bounds->add_option("--samples", opt_samples, "Monte Carlo sample count (0 disables sampling)");
    cmd_bounds->add_option("--seed", opt_seed, "random seed");
    cmd_bounds->add_option("--constants", opt_constants, "constants manifest path");
    cmd_bounds->add_option("--profile", opt_profile_in, "re-ingest a previously printed profile JSON file");
    cmd_bounds->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd_bounds->add_option("--level", level, "confidence level for the Wilson intervals");
    cmd_bounds->add_option("--workers", workers, "worker threads (output is worker-count invariant)");

    // verify
    std::string suite;
    std::uint64_t verify_seed = 20240809;
    auto* cmd_verify = app.add_subcommand("verify", "run a property suite: moments | cmb | ordering | counting | all");
    cmd_verify->add_option("suite", suite, "suite name")->required();
    cmd_verify->add_option("--seed", verify_seed, "random seed for the generated instances");

    // fit
    std::string corpus_dir;
    std::string fit_kind = "all";
    std::optional<std::string> fit_out;
    long long fit_samples = 1000000;
    std::uint64_t fit_seed = 20240809;
    double fit_level = 0.99;
    int fit_workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto* cmd_fit = app.add_subcommand("fit", "fit the bound constants on a corpus of problem files");
    cmd_fit->add_option("corpus", corpus_dir, "directory of problem files")->required();
    cmd_fit->add_option("--kind", fit_kind, "which constant to refit")
        ->check(CLI::IsMember({"R", "R4", "R0", "Rhc", "all"}));
    cmd_fit->add_option("--out", fit_out, "manifest output path (default: <corpus>/constants.json)");
    cmd_fit->add_option("--samples", fit_samples, "Monte Carlo samples per instance");
    cmd_fit->add_option("--seed", fit_seed, "base random seed");
    cmd_fit->add_option("--level", fit_level, "confidence level");
    cmd_fit->add_option("--workers", fit_workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitSchema;
    }

    if (cmd_profile->parsed()) {
        return run_guarded([&] {
            auto inst = pb::load_problem(profile_file);
            auto prof = pb::profile(inst.poly, inst.dists, inst.l_overrides);
            std::cout << prof.to_json().dump() << "\n";
            return kExitOk;
        });
    }

    if (cmd_bounds->parsed()) {
        return run_guarded([&] {
            auto inst = pb::load_problem(bounds_file);
            pb::SmoothnessProfile prof;
            if (opt_profile_in) {
                std::ifstream in(*opt_profile_in);
                if (!in) throw pb::SchemaError("cannot open profile file: " + *opt_profile_in);
                nlohmann::json pj = nlohmann::json::parse(in, nullptr, true);
                prof = pb::SmoothnessProfile::from_json(pj);
            } else {
                prof = pb::profile(inst.poly, inst.dists, inst.l_overrides);
            }
            auto constants = resolve_constants(opt_constants, &inst);

            std::vector<double> lambdas = lambda_grid;
            if (lambdas.empty()) lambdas = inst.analysis.lambdas;
            if (lambdas.empty()) lambdas = pb::default_lambda_grid(prof.variance);
            for (std::size_t i = 0; i < lambdas.size(); ++i) {
                if (lambdas[i] < 0 || (i > 0 && lambdas[i] <= lambdas[i - 1])) {
                    throw pb::SchemaError("lambda grid must be strictly increasing and nonnegative");
                }
            }

            bool signed_weights = false;
            for (const auto& [edge, w] : inst.poly.terms()) signed_weights = signed_weights || w < 0;
            if (signed_weights) {
                std::cerr << "note: polynomial has negative weights; the nonnegative-form bound uses |w|\n";
            }

            pb::CompareOptions options;
            options.samples = opt_samples.value_or(inst.analysis.samples);
            options.seed = opt_seed.value_or(inst.analysis.seed);
            options.level = level;
            options.workers = workers;
            auto rows = pb::compare(inst.poly, inst.dists, prof, lambdas, constants, options);

            if (format == "csv") {
                std::cout << pb::report_csv(rows);
            } else {
                std::cout << pb::report_json(rows).dump(2) << "\n";
            }
            for (const auto& row : rows) {
                if (row.violation) return kExitViolation;
            }
            return kExitOk;
        });
    }

    if (cmd_verify->parsed()) {
        if (!pb::known_suite(suite)) {
            std::cerr << "error: unknown suite \"" << suite
                      << "\" (expected moments | cmb | ordering | counting | all)\n";
            return kExitSchema;
        }
        return run_guarded([&] {
            auto results = pb::run_suite(suite, verify_seed);
            bool all_pass = true;
            for (const auto& r : results) {
                std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
                all_pass = all_pass && r.pass;
            }
            std::cout << (all_pass ? "all checks passed" : "some checks FAILED") << "\n";
            return all_pass ? kExitOk : kExitCheckFailed;
        });
    }

    if (cmd_fit->parsed()) {
        return run_guarded([&] {
            auto corpus = pb::load_corpus(corpus_dir);
            if (corpus.empty()) {
                std::cerr << "error: no problem files in " << corpus_dir << "\n";
                return kExitSchema;
            }
            std::string out_path = fit_out.value_or(corpus_dir + "/" + pb::kConstantsFileName);

            pb::BoundConstants constants;
            if (fit_kind != "all") {
                // partial refit: start from the existing manifest when present
                std::ifstream existing(out_path);
                if (existing) constants = pb::load_constants(out_path);
            }

            bool need_tails = fit_kind == "all" || fit_kind == "R" || fit_kind == "Rhc";
            bool need_moments = fit_kind == "all" || fit_kind == "R4";
            FitData data;
            if (need_tails || need_moments) {
                data = collect_fit_data(corpus, need_tails ? fit_samples : 1, fit_seed, fit_level, fit_workers);
            }

            if (fit_kind == "all" || fit_kind == "R4") constants.R4 = pb::fit_R4(data.moment_cases);
            if (fit_kind == "all" || fit_kind == "R") constants.R = pb::fit_R(data.tail_cases);
            if (fit_kind == "all" || fit_kind == "Rhc") {
                bool any_hc = false;
                for (const auto& c : data.tail_cases) any_hc = any_hc || c.hc_valid;
                if (any_hc) constants.R_hc = pb::fit_R_hc(data.tail_cases);
            }
            if (fit_kind == "all" || fit_kind == "R0") {
                double max_r0 = 0.0;
                for (const auto& entry : pb::counting_sweep(8)) max_r0 = std::max(max_r0, entry.min_r0);
                constants.R0 = std::max(1.0, max_r0);
            }

            constants.corpus_hash = pb::corpus_hash(corpus_dir);
            constants.fit_date = today_iso();
            pb::save_constants(out_path, constants);
            std::cout << "wrote " << out_path << ": R=" << pb::format_double(constants.R)
                      << " R4=" << pb::format_double(constants.R4) << " R0=" << pb::format_double(constants.R0)
                      << " R_hc=" << pb::format_double(constants.R_hc) << "\n";
            return kExitOk;
        });
    }

    return kExitSchema;
}

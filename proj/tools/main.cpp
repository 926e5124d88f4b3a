#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rankbench/artifacts.hpp"
#include "rankbench/error.hpp"
#include "rankbench/ingest.hpp"
#include "rankbench/pipeline.hpp"
#include "rankbench/report.hpp"
#include "rankbench/synth.hpp"

namespace {

using namespace rankbench;

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string default_artifact_dir() {
    const char* env = std::getenv(kArtifactDirEnv);
    return env != nullptr && *env != '\0' ? env : "artifacts";
}

FeatureExport features_for_fit(const std::string& log_path, const std::string& features_path,
                               int64_t min_games) {
    if (!features_path.empty()) return load_features(features_path);
    const MatchLog log = load_match_log(log_path);
    RunConfig cfg;
    cfg.dataset = log.dataset;
    cfg.fit.min_games = min_games;
    return collect_features(log, cfg);
}

int dispatch(int argc, char** argv) {
    CLI::App app{"behavioral and classical player ratings over shooter match logs"};
    app.require_subcommand(1);

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "convert a raw CSV into a canonical match log");
    std::string ingest_schema, ingest_input, ingest_output;
    ingest_cmd->add_option("--schema", ingest_schema, "dataset schema name")->required();
    ingest_cmd->add_option("input", ingest_input, "raw CSV path")->required();
    ingest_cmd->add_option("-o,--output", ingest_output, "canonical log path")->required();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic match log");
    std::string synth_config, synth_output;
    synth_cmd->add_option("--config", synth_config, "generator config JSON")->required();
    synth_cmd->add_option("-o,--output", synth_output, "canonical log path")->required();

    // fit factors | fit weights
    auto* fit_cmd = app.add_subcommand("fit", "fit model artifacts from a match log");
    fit_cmd->require_subcommand(1);
    std::string fit_log, fit_features_in, fit_output, fit_factors_path, fit_emit_features;
    int64_t fit_min_games = 1;
    int fit_levels = 10;
    double fit_threshold = 0.4;
    int fit_factor_count = 0;
    auto add_fit_common = [&](CLI::App* cmd) {
        cmd->add_option("--log", fit_log, "canonical match log");
        cmd->add_option("--features", fit_features_in, "feature-export file (instead of --log)");
        cmd->add_option("-o,--output", fit_output, "artifact output path")->required();
        cmd->add_option("--min-games", fit_min_games, "pre-match games required per observation");
        cmd->add_option("--emit-features", fit_emit_features, "also write the feature export here");
    };
    auto* fit_factors_cmd = fit_cmd->add_subcommand("factors", "extract and rotate factors");
    add_fit_common(fit_factors_cmd);
    fit_factors_cmd->add_option("--threshold", fit_threshold, "loading threshold for membership");
    fit_factors_cmd->add_option("--factor-count", fit_factor_count,
                                "override the eigenvalue criterion");
    auto* fit_weights_cmd = fit_cmd->add_subcommand("weights", "fit regression weights");
    add_fit_common(fit_weights_cmd);
    fit_weights_cmd->add_option("--factors", fit_factors_path,
                                "factor artifact (fitted fresh when omitted)");
    fit_weights_cmd->add_option("--levels", fit_levels, "ordinal percentile levels");

    // run
    auto* run_cmd = app.add_subcommand("run", "replay a log and score rank predictions");
    std::string run_config_path, run_log, run_artifacts, run_output;
    run_cmd->add_option("--config", run_config_path, "run config JSON")->required();
    run_cmd->add_option("--log", run_log, "canonical match log")->required();
    run_cmd->add_option("--artifacts", run_artifacts, "artifact directory");
    run_cmd->add_option("-o,--output", run_output, "report output path");

    // report
    auto* report_cmd = app.add_subcommand("report", "render a stored report");
    std::string report_in, report_format = "table";
    report_cmd->add_option("--in", report_in, "report JSON path")->required();
    report_cmd->add_option("--format", report_format, "table|machine")
        ->check(CLI::IsMember({"table", "machine"}));

    // fixtures
    auto* fixtures_cmd =
        app.add_subcommand("fixtures", "export the shipped loading/weight tables");
    std::string fixtures_dir;
    fixtures_cmd->add_option("-o,--output", fixtures_dir, "directory for the artifact files")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage problems are validation failures
    }

    if (ingest_cmd->parsed()) {
        const MatchLog log = ingest_csv_file(ingest_input, ingest_schema);
        save_match_log(ingest_output, log);
        std::cout << "ingested " << log.matches.size() << " matches (schema " << ingest_schema
                  << ") -> " << ingest_output << "\n";
        return 0;
    }

    if (synth_cmd->parsed()) {
        const SynthConfig cfg = synth_config_from_json_text(slurp_file(synth_config));
        const MatchLog log = synthesize(cfg);
        save_match_log(synth_output, log);
        std::cout << "synthesized " << log.matches.size() << " matches -> " << synth_output
                  << "\n";
        return 0;
    }

    if (fit_cmd->parsed()) {
        if (fit_log.empty() == fit_features_in.empty()) {
            throw ValidationError("fit: provide exactly one of --log or --features");
        }
        const FeatureExport features = features_for_fit(fit_log, fit_features_in, fit_min_games);
        if (!fit_emit_features.empty()) save_features(fit_emit_features, features);

        FitOptions options;
        options.min_games = fit_min_games;
        options.ordinal_levels = fit_levels;
        options.loading_threshold = fit_threshold;
        if (fit_factor_count > 0) options.factor_count = fit_factor_count;

        if (fit_factors_cmd->parsed()) {
            const FactorFit fit = fit_factor_stage(features, options);
            save_factor_model(fit_output, fit.model);
            std::cout << "fitted " << fit.model.factors.size() << " factor(s) from "
                      << features.rows.size() << " observations -> " << fit_output << "\n";
        } else {
            const FactorModel factors = fit_factors_path.empty()
                                            ? fit_factor_stage(features, options).model
                                            : load_factor_model(fit_factors_path);
            const WeightFitOutput fit = fit_weight_stage(features, factors, options);
            save_weight_model(fit_output, fit.weights);
            std::cout << "fitted " << fit.weights.terms.size() << " weight(s), lambda "
                      << fit.regression.lambda << ", cv score " << fit.regression.cv_score
                      << " -> " << fit_output << "\n";
            if (fit.regression.fell_back_to_binary) {
                std::cerr << "warning: fewer than 3 rank levels, fitted a binary model\n";
            }
        }
        return 0;
    }

    if (run_cmd->parsed()) {
        const std::string config_text = slurp_file(run_config_path);
        const RunConfig cfg = run_config_from_json_text(config_text);
        const MatchLog log = load_match_log(run_log);
        const std::string artifact_dir =
            run_artifacts.empty() ? default_artifact_dir() : run_artifacts;
        const RunOutput output =
            run_pipeline(log, cfg, run_config_hash(config_text), artifact_dir);
        if (!run_output.empty()) save_report(run_output, output.report);
        std::cout << report_to_table(output.report);
        return 0;
    }

    if (report_cmd->parsed()) {
        const EvalReport report = load_report(report_in);
        if (report_format == "machine") {
            std::cout << report_to_json(report);
        } else {
            std::cout << report_to_table(report);
        }
        return 0;
    }

    if (fixtures_cmd->parsed()) {
        std::filesystem::create_directories(fixtures_dir);
        for (const auto& dataset : fixture_datasets()) {
            save_factor_model(fixtures_dir + "/" + dataset + ".factors.json",
                              *fixture_factors(dataset));
            save_weight_model(fixtures_dir + "/" + dataset + ".weights.json",
                              *fixture_weights(dataset));
        }
        std::cout << "wrote fixture artifacts for " << fixture_datasets().size()
                  << " datasets -> " << fixtures_dir << "\n";
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ValidationError& err) {
        std::cerr << "validation error: " << err.what() << "\n";
        return 2;
    } catch (const FitError& err) {
        std::cerr << "fit error: " << err.what() << "\n";
        return 3;
    } catch (const IoError& err) {
        std::cerr << "io error: " << err.what() << "\n";
        return 4;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}

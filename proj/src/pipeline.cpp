#include "rankbench/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rankbench/error.hpp"
#include "rankbench/ingest.hpp"
#include "rankbench/rng.hpp"

namespace rankbench {

namespace {

using nlohmann::json;

SetupSpec setup_from_json(const json& j) {
    SetupSpec spec;
    spec.kind = setup_kind_from_string(j.at("kind").get<std::string>());
    switch (spec.kind) {
    case SetupKind::AllPlayers:
        spec = SetupSpec::all_players();
        break;
    case SetupKind::TopTier:
        spec = SetupSpec::top_tier();
        break;
    case SetupKind::Frequent:
        spec = SetupSpec::frequent();
        break;
    }
    spec.top_count = j.value("top_count", spec.top_count);
    spec.min_games = j.value("min_games", spec.min_games);
    spec.window = j.value("window", spec.window);
    if (spec.kind != SetupKind::AllPlayers && (spec.min_games <= 0 || spec.window <= 0)) {
        throw ValidationError("setup '" + spec.name() + "': parameters must be positive");
    }
    if (spec.kind == SetupKind::TopTier && spec.top_count <= 0) {
        throw ValidationError("setup 'top_tier': top_count must be positive");
    }
    return spec;
}

ReplayConfig replay_config(const MatchLog& log, const RunConfig& cfg, bool collect_rows) {
    const DatasetSchema& schema = dataset_schema(cfg.dataset);
    ReplayConfig rc;
    rc.dataset = cfg.dataset;
    rc.mode = log.mode;
    rc.features = FeatureSet::from_raw_stats(schema.stats, log.mode);
    rc.systems = cfg.systems;
    rc.zscore = cfg.zscore;
    rc.seed = cfg.seed;
    rc.collect_design_rows = collect_rows;
    rc.design_min_games = cfg.fit.min_games;
    return rc;
}

} // namespace

OptimizerConfig FitOptions::optimizer() const {
    OptimizerConfig opt;
    opt.lambda_grid = lambda_grid;
    opt.cv_folds = folds;
    opt.cv_seed = cv_seed;
    return opt;
}

FactorConfig FitOptions::factor_config() const {
    FactorConfig fc;
    fc.factor_count = factor_count;
    fc.loading_threshold = loading_threshold;
    return fc;
}

RunConfig run_config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ValidationError(std::string("run config: ") + err.what());
    }

    RunConfig cfg;
    cfg.dataset = j.value("dataset", cfg.dataset);
    dataset_schema(cfg.dataset); // must exist
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("sources")) {
        cfg.sources.clear();
        for (const auto& s : j.at("sources")) cfg.sources.push_back(s.get<std::string>());
    }
    if (cfg.sources.empty()) throw ValidationError("run config: no sources");
    for (const auto& s : cfg.sources) SourceSpec::parse(s); // must parse

    if (j.contains("setups")) {
        cfg.setups.clear();
        for (const auto& s : j.at("setups")) cfg.setups.push_back(setup_from_json(s));
    }
    if (cfg.setups.empty()) throw ValidationError("run config: no setups");

    if (j.contains("systems")) {
        const json& s = j.at("systems");
        cfg.systems.elo_k = s.value("elo_k", cfg.systems.elo_k);
        cfg.systems.glicko_q = s.value("glicko_q", cfg.systems.glicko_q);
        cfg.systems.glicko_c = s.value("glicko_c", cfg.systems.glicko_c);
        cfg.systems.glicko_rd_cap = s.value("glicko_rd_cap", cfg.systems.glicko_rd_cap);
        cfg.systems.trueskill_beta = s.value("trueskill_beta", cfg.systems.trueskill_beta);
        cfg.systems.trueskill_tau = s.value("trueskill_tau", cfg.systems.trueskill_tau);
        cfg.systems.draw_probability = s.value("draw_probability", cfg.systems.draw_probability);
        if (cfg.systems.elo_k <= 0 || cfg.systems.glicko_q <= 0 || cfg.systems.glicko_c <= 0 ||
            cfg.systems.glicko_rd_cap <= 0 || cfg.systems.trueskill_beta <= 0 ||
            cfg.systems.trueskill_tau <= 0 || cfg.systems.draw_probability <= 0) {
            throw ValidationError("run config: system constants must be positive");
        }
    }
    if (j.contains("zscore")) {
        const json& z = j.at("zscore");
        const std::string mode = z.value("mode", "incremental");
        if (mode == "incremental") {
            cfg.zscore.mode = ZscoreConfig::Mode::Incremental;
        } else if (mode == "snapshot") {
            cfg.zscore.mode = ZscoreConfig::Mode::Snapshot;
        } else {
            throw ValidationError("run config: unknown zscore mode '" + mode + "'");
        }
        cfg.zscore.snapshot_interval = z.value("snapshot_interval", cfg.zscore.snapshot_interval);
        if (cfg.zscore.snapshot_interval <= 0) {
            throw ValidationError("run config: snapshot_interval must be positive");
        }
    }
    if (j.contains("fit")) {
        const json& f = j.at("fit");
        if (f.contains("lambda_grid")) {
            cfg.fit.lambda_grid.clear();
            for (const auto& l : f.at("lambda_grid")) cfg.fit.lambda_grid.push_back(l.get<double>());
        }
        cfg.fit.folds = f.value("folds", cfg.fit.folds);
        cfg.fit.cv_seed = f.value("cv_seed", cfg.fit.cv_seed);
        cfg.fit.min_games = f.value("min_games", cfg.fit.min_games);
        cfg.fit.ordinal_levels = f.value("ordinal_levels", cfg.fit.ordinal_levels);
        cfg.fit.loading_threshold = f.value("loading_threshold", cfg.fit.loading_threshold);
        if (f.contains("factor_count")) cfg.fit.factor_count = f.at("factor_count").get<int>();
    }
    cfg.factors_ref = j.value("factors", cfg.factors_ref);
    cfg.weights_ref = j.value("weights", cfg.weights_ref);
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return run_config_from_json_text(ss.str());
}

std::string run_config_hash(const std::string& config_text) {
    std::string canonical;
    try {
        canonical = json::parse(config_text).dump();
    } catch (const json::parse_error& err) {
        throw ValidationError(std::string("run config: ") + err.what());
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical)));
    return buf;
}

FeatureExport collect_features(const MatchLog& log, const RunConfig& cfg) {
    ReplayConfig rc = replay_config(log, cfg, true);
    const ReplayResult result = run_replay(log.matches, rc);

    FeatureExport out;
    out.dataset = cfg.dataset;
    out.mode = log.mode;
    out.set = rc.features;
    out.rows = result.design_rows;
    return out;
}

FactorFit fit_factor_stage(const FeatureExport& features, const FitOptions& options) {
    const DesignMatrix matrix = features_design(features.rows, features.set);
    FactorFit fit = fit_factors(matrix, options.factor_config());
    fit.model.dataset = features.dataset;
    return fit;
}

WeightFitOutput fit_weight_stage(const FeatureExport& features, const FactorModel& factors,
                                 const FitOptions& options) {
    const DesignMatrix matrix = regression_design(features.rows, features.set, factors,
                                                  features.mode, options.ordinal_levels);
    WeightFitOutput out;
    out.regression = features.mode == Mode::FreeForAll
                         ? fit_ordinal_logit(matrix, options.optimizer())
                         : fit_binary_logit(matrix, options.optimizer());
    out.weights = normalize_weights(out.regression);
    out.weights.dataset = features.dataset;
    return out;
}

RunOutput run_pipeline(const MatchLog& log, const RunConfig& cfg, const std::string& config_hash,
                       const std::string& artifact_dir) {
    if (log.dataset != cfg.dataset) {
        throw ValidationError("run config dataset '" + cfg.dataset + "' does not match log '" +
                              log.dataset + "'");
    }

    bool wants_weighted = false;
    for (const auto& id : cfg.sources) {
        if (id == "weighted") wants_weighted = true;
    }

    RunOutput output;
    std::optional<FactorModel> factors;
    std::optional<WeightModel> weights;
    if (wants_weighted) {
        const bool fit_needed = cfg.factors_ref == "fit" || cfg.weights_ref == "fit";
        std::optional<FeatureExport> features;
        if (fit_needed) features = collect_features(log, cfg);

        if (cfg.factors_ref == "fixture") {
            factors = fixture_factors(cfg.dataset);
            if (!factors) {
                throw ValidationError("artifact stage: no fixture factor table for dataset '" +
                                      cfg.dataset + "'");
            }
        } else if (cfg.factors_ref == "fit") {
            try {
                factors = fit_factor_stage(*features, cfg.fit).model;
            } catch (const FitError& err) {
                throw FitError("fit stage: " + std::string(err.what()));
            }
        } else {
            try {
                factors = load_factor_model(cfg.factors_ref);
            } catch (const IoError& err) {
                throw IoError("artifact stage: " + std::string(err.what()));
            }
        }

        if (cfg.weights_ref == "fixture") {
            weights = fixture_weights(cfg.dataset);
            if (!weights) {
                throw ValidationError("artifact stage: no fixture weight table for dataset '" +
                                      cfg.dataset + "'");
            }
        } else if (cfg.weights_ref == "fit") {
            try {
                weights = fit_weight_stage(*features, *factors, cfg.fit).weights;
            } catch (const FitError& err) {
                throw FitError("fit stage: " + std::string(err.what()));
            }
        } else {
            try {
                weights = load_weight_model(cfg.weights_ref);
            } catch (const IoError& err) {
                throw IoError("artifact stage: " + std::string(err.what()));
            }
        }

        if (fit_needed) {
            std::filesystem::create_directories(artifact_dir);
            if (cfg.factors_ref == "fit") {
                save_factor_model(artifact_dir + "/" + cfg.dataset + ".factors.json", *factors);
            }
            if (cfg.weights_ref == "fit") {
                save_weight_model(artifact_dir + "/" + cfg.dataset + ".weights.json", *weights);
            }
            output.fitted = FitOutput{*factors, *weights};
        }
    }

    ReplayConfig rc = replay_config(log, cfg, false);
    for (const auto& id : cfg.sources) rc.sources.push_back(SourceSpec::parse(id));
    rc.factors = factors;
    rc.weights = weights;

    ReplayResult result;
    try {
        result = run_replay(log.matches, rc);
    } catch (const ValidationError& err) {
        throw ValidationError("replay stage: " + std::string(err.what()));
    }

    output.report.dataset = cfg.dataset;
    output.report.mode = log.mode;
    output.report.seed = cfg.seed;
    output.report.config_hash = config_hash;
    output.report.sources = cfg.sources;
    for (const auto& setup : cfg.setups) {
        output.report.setups.push_back(score_setup(result, setup));
    }
    return output;
}

} // namespace rankbench

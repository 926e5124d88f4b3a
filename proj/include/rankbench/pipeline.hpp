#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rankbench/artifacts.hpp"
#include "rankbench/factor_analysis.hpp"
#include "rankbench/logistic.hpp"
#include "rankbench/match_log.hpp"
#include "rankbench/replay.hpp"
#include "rankbench/report.hpp"

namespace rankbench {

// Environment variable naming the default artifact directory.
inline constexpr const char* kArtifactDirEnv = "RANKBENCH_ARTIFACT_DIR";

struct FitOptions {
    std::vector<double> lambda_grid = {0.001, 0.01, 0.1, 1.0};
    int folds = 5;
    uint64_t cv_seed = 17;
    int64_t min_games = 1;   // pre-match games required for a design row
    int ordinal_levels = 10; // rank-percentile buckets for ordinal targets
    double loading_threshold = 0.4;
    std::optional<int> factor_count;

    OptimizerConfig optimizer() const;
    FactorConfig factor_config() const;
};

struct RunConfig {
    std::string dataset = "synthetic";
    uint64_t seed = 0;
    std::vector<std::string> sources = {"elo", "glicko", "trueskill", "naive"};
    std::vector<SetupSpec> setups = {SetupSpec::all_players()};
    SystemConfig systems;
    ZscoreConfig zscore;
    FitOptions fit;
    // "fixture", "fit", or an artifact file path.
    std::string factors_ref = "fixture";
    std::string weights_ref = "fixture";
};

RunConfig run_config_from_json_text(const std::string& text);
RunConfig load_run_config(const std::string& path);
// FNV-1a over the canonicalized config document.
std::string run_config_hash(const std::string& config_text);

// Replay the log without prediction sources, producing the feature-export
// rows the fit stage consumes.
FeatureExport collect_features(const MatchLog& log, const RunConfig& cfg);

FactorFit fit_factor_stage(const FeatureExport& features, const FitOptions& options);

struct WeightFitOutput {
    RegressionModel regression;
    WeightModel weights;
};

WeightFitOutput fit_weight_stage(const FeatureExport& features, const FactorModel& factors,
                                 const FitOptions& options);

struct FitOutput {
    FactorModel factors;
    WeightModel weights;
};

struct RunOutput {
    EvalReport report;
    std::optional<FitOutput> fitted;
};

// Optional fit stage, then a full replay and one setup report per setup.
// Fitted artifacts are written into artifact_dir when a fit stage ran.
RunOutput run_pipeline(const MatchLog& log, const RunConfig& cfg, const std::string& config_hash,
                       const std::string& artifact_dir);

} // namespace rankbench

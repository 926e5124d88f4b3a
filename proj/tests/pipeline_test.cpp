#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rankbench/error.hpp"
#include "rankbench/ingest.hpp"
#include "rankbench/logistic.hpp"
#include "rankbench/pipeline.hpp"
#include "rankbench/rng.hpp"
#include "rankbench/synth.hpp"

#include "helpers.hpp"

using namespace rankbench;
using namespace rankbench::testutil;

namespace {

MatchLog mini_csgo_log() {
    std::ostringstream csv;
    csv << "match_id,timestamp_ms,team_slot,team_rank,player_id,kills,deaths,headshots,"
           "damage_dealt,kill_assists,flash_assists\n";
    std::mt19937_64 rng(14);
    for (int m = 0; m < 40; ++m) {
        const int winner = static_cast<int>(uniform_index(rng, 2));
        for (int slot = 0; slot < 2; ++slot) {
            for (int k = 0; k < 2; ++k) {
                const int pid = slot * 4 + k + (m % 3) * 2;
                csv << "g" << m << "," << 1000 * (m + 1) << "," << slot << ","
                    << (slot == winner ? 1 : 2) << ",pl" << pid << ","
                    << 5 + static_cast<int>(uniform_index(rng, 20)) << ","
                    << 5 + static_cast<int>(uniform_index(rng, 15)) << ","
                    << static_cast<int>(uniform_index(rng, 10)) << ","
                    << 500 + static_cast<int>(uniform_index(rng, 2000)) << ","
                    << static_cast<int>(uniform_index(rng, 6)) << ","
                    << static_cast<int>(uniform_index(rng, 3)) << "\n";
            }
        }
    }
    std::istringstream in(csv.str());
    return ingest_csv(in, "csgo");
}

} // namespace

TEST_SUITE("pipeline") {
    TEST_CASE("run config parsing applies defaults and validates") {
        const RunConfig cfg = run_config_from_json_text(
            R"({"dataset":"csgo","seed":3,"sources":["elo","weighted"],
                "setups":[{"kind":"top_tier","top_count":20}],
                "systems":{"elo_k":24},"zscore":{"mode":"snapshot","snapshot_interval":50},
                "fit":{"lambda_grid":[0.05],"min_games":2}})");
        CHECK(cfg.dataset == "csgo");
        CHECK(cfg.systems.elo_k == 24.0);
        CHECK(cfg.zscore.mode == ZscoreConfig::Mode::Snapshot);
        CHECK(cfg.setups[0].top_count == 20);
        CHECK(cfg.setups[0].min_games == 10); // default retained
        CHECK(cfg.fit.lambda_grid == std::vector<double>{0.05});

        CHECK_THROWS_AS(run_config_from_json_text(R"({"dataset":"quake"})"), ValidationError);
        CHECK_THROWS_AS(run_config_from_json_text(R"({"sources":["psychic"]})"), ValidationError);
        CHECK_THROWS_AS(run_config_from_json_text(R"({"systems":{"elo_k":-1}})"), ValidationError);
        CHECK_THROWS_AS(run_config_from_json_text(R"({"setups":[{"kind":"warmup"}]})"),
                        ValidationError);
    }

    TEST_CASE("config hash is stable under whitespace but not values") {
        const std::string a = run_config_hash(R"({ "dataset": "csgo", "seed": 1 })");
        const std::string b = run_config_hash(R"({"seed":1,"dataset":"csgo"})");
        const std::string c = run_config_hash(R"({"dataset":"csgo","seed":2})");
        CHECK(a == b);
        CHECK(a != c);
        CHECK(a.rfind("fnv1a:", 0) == 0);
    }

    TEST_CASE("fixture-backed run skips the fit stage") {
        const MatchLog log = mini_csgo_log();
        RunConfig cfg;
        cfg.dataset = "csgo";
        cfg.sources = {"elo", "glicko", "trueskill", "naive", "weighted"};
        cfg.setups = {SetupSpec::all_players()};
        cfg.factors_ref = "fixture";
        cfg.weights_ref = "fixture";
        const RunOutput out = run_pipeline(log, cfg, "fnv1a:test", "/tmp/rb_test_unused");
        CHECK_FALSE(out.fitted.has_value());
        CHECK(out.report.setups.size() == 1);
        CHECK(out.report.setups[0].metric == "accuracy");
        for (const auto& source : cfg.sources) {
            CHECK(out.report.setups[0].scores.at(source).has_value());
        }
        CHECK(out.report.setups[0].matches_scored == 40);
    }

    TEST_CASE("every fixture weight term resolves under its dataset schema") {
        for (const auto& dataset : fixture_datasets()) {
            const DatasetSchema& schema = dataset_schema(dataset);
            const FeatureSet features = schema.feature_set();
            const auto factors = *fixture_factors(dataset);
            for (const auto& factor : factors.factors) {
                for (const auto& [feature, loading] : factor.loadings) {
                    CHECK(features.has(feature));
                }
            }
            const auto weights = *fixture_weights(dataset);
            for (const auto& [term, weight] : weights.terms) {
                const bool is_factor = factors.find(term) != nullptr;
                const auto feature = feature_from_name(term);
                CHECK((is_factor || (feature && features.has(*feature))));
            }
        }
    }

    TEST_CASE("weighted source without artifacts is a stage-tagged error") {
        const MatchLog log = mini_csgo_log();
        RunConfig cfg;
        cfg.dataset = "csgo";
        cfg.sources = {"weighted"};
        cfg.weights_ref = "/nonexistent/weights.json";
        try {
            run_pipeline(log, cfg, "fnv1a:test", "/tmp/rb_test_unused");
            FAIL("expected IoError");
        } catch (const IoError& err) {
            CHECK(std::string(err.what()).find("artifact stage") != std::string::npos);
        }

        RunConfig synth_cfg;
        synth_cfg.dataset = "synthetic";
        synth_cfg.sources = {"weighted"};
        const MatchLog synth_log = synthesize({.players = 8, .matches = 5, .team_size = 1});
        CHECK_THROWS_AS(run_pipeline(synth_log, synth_cfg, "h", "/tmp/rb_test_unused"),
                        ValidationError); // no fixture table for synthetic
    }

    TEST_CASE("dataset mismatch between config and log is rejected") {
        const MatchLog log = mini_csgo_log();
        RunConfig cfg;
        cfg.dataset = "halo_ctf";
        CHECK_THROWS_AS(run_pipeline(log, cfg, "h", "/tmp/rb_test_unused"), ValidationError);
    }

    TEST_CASE("snapshot z-scoring freezes moments between refreshes") {
        const MatchLog log = synthesize(
            {.players = 12, .matches = 12, .teams_per_match = 2, .team_size = 2, .seed = 77});
        ReplayConfig rc;
        rc.dataset = "synthetic";
        rc.mode = Mode::HeadToHead;
        rc.features = dataset_schema("synthetic").feature_set();
        rc.zscore.mode = ZscoreConfig::Mode::Snapshot;
        rc.zscore.snapshot_interval = 6;
        rc.sources = {SourceSpec::parse("naive")};
        const ReplayResult result = run_replay(log.matches, rc);

        // Before the first snapshot every behavioral value is zero.
        for (std::size_t i = 0; i < 6; ++i) {
            for (const auto& [slot, value] : result.records[i].team_values) {
                CHECK(value == 0.0);
            }
        }
        bool any_nonzero = false;
        for (std::size_t i = 6; i < result.records.size(); ++i) {
            for (const auto& [slot, value] : result.records[i].team_values) {
                any_nonzero |= value != 0.0;
            }
        }
        CHECK(any_nonzero);
    }

    TEST_CASE("regression design builds factor plus unabsorbed columns") {
        FactorModel factors;
        factors.dataset = "synthetic";
        factors.factors.push_back(
            {"skill", {{Feature::KdRatio, 0.6}, {Feature::Accuracy, 0.4}}});

        std::vector<DesignRow> rows;
        for (int i = 0; i < 4; ++i) {
            DesignRow row;
            row.match_id = "m" + std::to_string(i / 2);
            row.player = "p" + std::to_string(i);
            row.rank = i % 2 == 0 ? 1 : 2;
            row.team_count = 2;
            row.won = i % 2 == 0;
            row.drawn = i >= 2; // second match drawn
            row.zscored.zscored = true;
            row.zscored.set(Feature::KdRatio, 1.0);
            row.zscored.set(Feature::Accuracy, -1.0);
            row.zscored.set(Feature::Experience, 0.5);
            rows.push_back(row);
        }
        FeatureSet set;
        for (Feature f : {Feature::KdRatio, Feature::Accuracy, Feature::Experience}) {
            set.available[static_cast<int>(f)] = true;
        }

        const DesignMatrix binary = regression_design(rows, set, factors, Mode::HeadToHead, 10);
        REQUIRE(binary.column_ids == std::vector<std::string>{"skill", "experience"});
        CHECK(binary.rows() == 2); // drawn match skipped
        CHECK(binary.at(0, 0) == doctest::Approx(0.6 * 1.0 + 0.4 * -1.0));
        CHECK(binary.at(0, 1) == doctest::Approx(0.5));
        CHECK(binary.target == std::vector<int>{1, 0});

        const DesignMatrix ordinal = regression_design(rows, set, factors, Mode::FreeForAll, 10);
        CHECK(ordinal.rows() == 4);
        CHECK(ordinal.target[0] == 10); // percentile 1.0 -> top bucket
        CHECK(ordinal.target[1] == 1);  // percentile 0.0 -> bottom bucket
    }

    TEST_CASE("ordinal percentile levels bucket ranks in order") {
        std::vector<DesignRow> rows;
        const int teams = 21;
        for (int r = 1; r <= teams; ++r) {
            DesignRow row;
            row.match_id = "m";
            row.player = "p" + std::to_string(r);
            row.rank = r;
            row.team_count = teams;
            row.zscored.zscored = true;
            row.zscored.set(Feature::KdRatio, 0.0);
            rows.push_back(row);
        }
        FeatureSet set;
        set.available[static_cast<int>(Feature::KdRatio)] = true;
        const DesignMatrix m = regression_design(rows, set, FactorModel{}, Mode::FreeForAll, 5);
        REQUIRE(m.rows() == 21);
        CHECK(m.target.front() == 5); // rank 1, full percentile
        CHECK(m.target[10] == 3);     // midpoint rank
        CHECK(m.target.back() == 1);  // last place
        for (std::size_t i = 1; i < m.target.size(); ++i) {
            CHECK(m.target[i] <= m.target[i - 1]); // monotone in rank
        }
    }

    TEST_CASE("cross-validated ordinal scoring rewards informative features") {
        std::mt19937_64 rng(31);
        DesignMatrix informative;
        informative.column_ids = {"signal"};
        DesignMatrix shuffled = informative;
        for (int g = 0; g < 80; ++g) {
            std::vector<double> scores;
            for (int i = 0; i < 4; ++i) scores.push_back(normal_draw(rng));
            std::vector<int> order(4);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return scores[a] > scores[b]; });
            std::vector<int> rank_of(4);
            for (int pos = 0; pos < 4; ++pos) rank_of[order[pos]] = pos + 1;
            for (int i = 0; i < 4; ++i) {
                informative.values.push_back(scores[i]);
                informative.target.push_back(5 - rank_of[i]); // higher level = better
                informative.group.push_back("g" + std::to_string(g));
                informative.observed_rank.push_back(rank_of[i]);
                informative.group_team_count.push_back(4);

                shuffled.values.push_back(normal_draw(rng)); // unrelated feature
                shuffled.target.push_back(5 - rank_of[i]);
                shuffled.group.push_back("g" + std::to_string(g));
                shuffled.observed_rank.push_back(rank_of[i]);
                shuffled.group_team_count.push_back(4);
            }
        }
        OptimizerConfig cfg;
        cfg.lambda_grid = {0.01};
        const double good = cross_validate(informative, RegressionModel::Family::Ordinal, 0.01, cfg);
        const double null = cross_validate(shuffled, RegressionModel::Family::Ordinal, 0.01, cfg);
        CHECK(good > 0.95);
        CHECK(good > null);
    }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "rankbench/error.hpp"
#include "rankbench/evaluate.hpp"
#include "rankbench/replay.hpp"
#include "rankbench/rng.hpp"
#include "rankbench/synth.hpp"

#include "helpers.hpp"

using namespace rankbench;
using namespace rankbench::testutil;

namespace {

PredictionRecord h2h_record(const std::string& id, int predicted_winner, int observed_winner) {
    PredictionRecord r;
    r.match_id = id;
    r.mode = Mode::HeadToHead;
    r.predicted_ranks = {{0, predicted_winner == 0 ? 1 : 2}, {1, predicted_winner == 1 ? 1 : 2}};
    r.observed_ranks = {{0, observed_winner == 0 ? 1 : 2}, {1, observed_winner == 1 ? 1 : 2}};
    return r;
}

ReplayConfig synthetic_replay_config(std::vector<std::string> sources, uint64_t seed = 5) {
    std::array<bool, kRawStatCount> stats{};
    stats.fill(true);
    ReplayConfig cfg;
    cfg.dataset = "synthetic";
    cfg.mode = Mode::HeadToHead;
    cfg.features = FeatureSet::from_raw_stats(stats, Mode::HeadToHead);
    cfg.seed = seed;
    for (const auto& s : sources) cfg.sources.push_back(SourceSpec::parse(s));
    return cfg;
}

} // namespace

TEST_SUITE("eval_harness") {
    TEST_CASE("predict_ranks argsorts descending") {
        std::mt19937_64 rng(1);
        const auto ranks = predict_ranks({{0, 3.0}, {1, 1.0}, {2, 2.0}}, rng);
        CHECK(ranks.at(0) == 1);
        CHECK(ranks.at(2) == 2);
        CHECK(ranks.at(1) == 3);

        const auto pair = predict_ranks({{7, 5.0}, {9, 4.0}}, rng);
        CHECK(pair.at(7) == 1);
        CHECK(pair.at(9) == 2);
    }

    TEST_CASE("predict_ranks output is a permutation of 1..T") {
        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 50; ++trial) {
            std::map<int, double> values;
            const int t = 2 + static_cast<int>(uniform_index(rng, 7));
            for (int i = 0; i < t; ++i) {
                values[i] = std::round(4.0 * uniform_real(rng)); // force some ties
            }
            const auto ranks = predict_ranks(values, rng);
            std::vector<int> seen(static_cast<std::size_t>(t), 0);
            for (const auto& [slot, rank] : ranks) seen[static_cast<std::size_t>(rank - 1)] += 1;
            for (int count : seen) CHECK(count == 1);
        }
    }

    TEST_CASE("exact ties are split evenly across seeds and fixed per seed") {
        int a_first = 0;
        const int trials = 2000;
        for (int seed = 0; seed < trials; ++seed) {
            std::mt19937_64 rng(static_cast<uint64_t>(seed));
            const auto ranks = predict_ranks({{0, 2.0}, {1, 2.0}}, rng);
            if (ranks.at(0) == 1) ++a_first;
        }
        CHECK(std::fabs(static_cast<double>(a_first) / trials - 0.5) < 0.05);

        std::mt19937_64 one(123);
        std::mt19937_64 two(123);
        CHECK(predict_ranks({{0, 2.0}, {1, 2.0}, {2, 2.0}}, one) ==
              predict_ranks({{0, 2.0}, {1, 2.0}, {2, 2.0}}, two));
    }

    TEST_CASE("strictly increasing transforms leave predictions unchanged") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 30; ++trial) {
            std::map<int, double> values;
            for (int i = 0; i < 5; ++i) values[i] = std::round(6.0 * uniform_real(rng));
            std::map<int, double> transformed;
            for (const auto& [slot, v] : values) transformed[slot] = 2.0 * v + 1.0;

            std::mt19937_64 rng_a(trial);
            std::mt19937_64 rng_b(trial);
            CHECK(predict_ranks(values, rng_a) == predict_ranks(transformed, rng_b));
        }
    }

    TEST_CASE("predict_ranks rejects bad input") {
        std::mt19937_64 rng(4);
        CHECK_THROWS_AS(predict_ranks({{0, 1.0}}, rng), ValidationError);
        CHECK_THROWS_AS(predict_ranks({{0, 1.0}, {1, std::nan("")}}, rng), ValidationError);
    }

    TEST_CASE("accuracy counts predicted winners") {
        std::vector<PredictionRecord> all = {h2h_record("a", 0, 0), h2h_record("b", 1, 1)};
        CHECK(accuracy(all) == doctest::Approx(1.0));

        std::vector<PredictionRecord> three_of_four = {
            h2h_record("a", 0, 0), h2h_record("b", 1, 1), h2h_record("c", 0, 0),
            h2h_record("d", 0, 1)};
        CHECK(accuracy(three_of_four) == doctest::Approx(0.75));
    }

    TEST_CASE("accuracy contract errors") {
        CHECK_THROWS_WITH_AS(accuracy({}), "accuracy: no evaluable matches", ValidationError);

        PredictionRecord ffa = h2h_record("x", 0, 0);
        ffa.mode = Mode::FreeForAll;
        std::vector<PredictionRecord> with_ffa = {ffa};
        CHECK_THROWS_AS(accuracy(with_ffa), ValidationError);

        PredictionRecord drawn = h2h_record("y", 0, 0);
        drawn.observed_ranks = {{0, 1}, {1, 1}};
        std::vector<PredictionRecord> with_draw = {drawn};
        CHECK_THROWS_AS(accuracy(with_draw), ValidationError);
    }

    TEST_CASE("ndcg hand-evaluated cases") {
        PredictionRecord perfect;
        perfect.mode = Mode::FreeForAll;
        perfect.predicted_ranks = {{0, 1}, {1, 2}, {2, 3}};
        perfect.observed_ranks = {{0, 1}, {1, 2}, {2, 3}};
        CHECK(ndcg(perfect) == doctest::Approx(1.0));

        PredictionRecord reversed;
        reversed.mode = Mode::FreeForAll;
        reversed.predicted_ranks = {{0, 2}, {1, 1}};
        reversed.observed_ranks = {{0, 1}, {1, 2}};
        const double two_team = (0.0 + 1.0 / std::log2(3.0)) / 1.0;
        CHECK(ndcg(reversed) == doctest::Approx(two_team));
        CHECK(ndcg(reversed) == doctest::Approx(0.6309).epsilon(1e-4));

        // Predicted sequence: observed-2nd, observed-1st, observed-3rd.
        PredictionRecord swapped;
        swapped.mode = Mode::FreeForAll;
        swapped.predicted_ranks = {{0, 2}, {1, 1}, {2, 3}};
        swapped.observed_ranks = {{0, 1}, {1, 2}, {2, 3}};
        const double dcg = 1.0 / std::log2(2.0) + 2.0 / std::log2(3.0) + 0.0;
        const double idcg = 2.0 / std::log2(2.0) + 1.0 / std::log2(3.0) + 0.0;
        CHECK(ndcg(swapped) == doctest::Approx(dcg / idcg));
        CHECK(ndcg(swapped) == doctest::Approx(0.8597).epsilon(1e-4));
    }

    TEST_CASE("ndcg is 1 exactly on ideal orders and in [0,1] always") {
        std::mt19937_64 rng(6);
        for (int trial = 0; trial < 60; ++trial) {
            const int t = 2 + static_cast<int>(uniform_index(rng, 6));
            PredictionRecord r;
            r.mode = Mode::FreeForAll;
            std::vector<int> perm(static_cast<std::size_t>(t));
            std::iota(perm.begin(), perm.end(), 1);
            shuffle_inplace(perm, rng);
            for (int i = 0; i < t; ++i) {
                r.observed_ranks[i] = i + 1;
                r.predicted_ranks[i] = perm[static_cast<std::size_t>(i)];
            }
            const double score = ndcg(r);
            CHECK(score >= 0.0);
            CHECK(score <= 1.0 + 1e-12);
            bool ideal = true;
            for (int i = 0; i < t; ++i) ideal &= r.predicted_ranks[i] == r.observed_ranks[i];
            if (ideal) {
                CHECK(score == doctest::Approx(1.0));
            } else {
                CHECK(score < 1.0); // distinct relevances, any inversion costs
            }
        }
    }

    TEST_CASE("ndcg with observed ties treats tied teams as equally relevant") {
        PredictionRecord tied;
        tied.mode = Mode::FreeForAll;
        tied.observed_ranks = {{0, 1}, {1, 1}, {2, 3}};
        tied.predicted_ranks = {{0, 2}, {1, 1}, {2, 3}};
        CHECK(ndcg(tied) == doctest::Approx(1.0)); // both orders of the tie are ideal
    }

    TEST_CASE("top tier selection caps at the configured count") {
        std::vector<PlayerStanding> standings;
        for (int i = 0; i < 60; ++i) {
            standings.push_back({"p" + std::to_string(i), 11, static_cast<double>(i)});
        }
        const Selection sel = select_top_tier(standings, SetupSpec::top_tier());
        CHECK(sel.players.size() == 50);
        CHECK(sel.window == 10);
        CHECK(sel.players.front() == "p59"); // highest conservative estimate first
    }

    TEST_CASE("top tier takes all qualifiers when fewer than the cap") {
        std::vector<PlayerStanding> standings;
        for (int i = 0; i < 30; ++i) {
            standings.push_back({"p" + std::to_string(i), 20, static_cast<double>(i)});
        }
        CHECK(select_top_tier(standings, SetupSpec::top_tier()).players.size() == 30);
    }

    TEST_CASE("selection thresholds are strict") {
        std::vector<PlayerStanding> standings = {
            {"ten", 10, 5.0}, {"eleven", 11, 4.0}, {"hundred", 100, 3.0}, {"more", 101, 2.0}};
        const Selection top = select_top_tier(standings, SetupSpec::top_tier());
        CHECK(std::find(top.players.begin(), top.players.end(), "ten") == top.players.end());
        CHECK(std::find(top.players.begin(), top.players.end(), "eleven") != top.players.end());

        const Selection freq = select_frequent(standings, SetupSpec::frequent());
        CHECK(freq.players == std::vector<PlayerId>{"more"});
        CHECK(freq.window == 100);

        const Selection none = select_frequent({}, SetupSpec::frequent());
        CHECK(none.players.empty());
    }

    TEST_CASE("replay predicts before updating") {
        const std::vector<MatchRecord> matches = {duel("m1", 100, "a", "b"),
                                                  duel("m2", 200, "a", "b")};
        const ReplayResult result = run_replay(matches, synthetic_replay_config({"elo"}));
        REQUIRE(result.records.size() == 2);
        // First prediction sees both players at the default rating.
        CHECK(result.records[0].team_values.at(0) == doctest::Approx(1500.0));
        CHECK(result.records[0].team_values.at(1) == doctest::Approx(1500.0));
        // Second sees the post-match-1 state only.
        CHECK(result.records[1].team_values.at(0) == doctest::Approx(1516.0));
        CHECK(result.records[1].team_values.at(1) == doctest::Approx(1484.0));
    }

    TEST_CASE("replay rejects unsorted input and unknown sources") {
        const std::vector<MatchRecord> unsorted = {duel("m1", 200, "a", "b"),
                                                   duel("m2", 100, "a", "b")};
        CHECK_THROWS_AS(run_replay(unsorted, synthetic_replay_config({"elo"})), ValidationError);
        CHECK_THROWS_AS(SourceSpec::parse("bogus"), ValidationError);
        CHECK_THROWS_AS(SourceSpec::parse("mu:not_a_feature"), ValidationError);
    }

    TEST_CASE("replay prefix records equal full-stream records") {
        const MatchLog log = synthesize({.players = 24,
                                         .matches = 40,
                                         .teams_per_match = 2,
                                         .team_size = 3,
                                         .mode = Mode::HeadToHead,
                                         .rank_noise = 0.5,
                                         .seed = 9});
        const auto cfg = synthetic_replay_config({"elo", "naive"});
        const ReplayResult full = run_replay(log.matches, cfg);
        const std::vector<MatchRecord> prefix(log.matches.begin(), log.matches.begin() + 25);
        const ReplayResult partial = run_replay(prefix, cfg);
        REQUIRE(partial.records.size() == 50);
        for (std::size_t i = 0; i < partial.records.size(); ++i) {
            CHECK(partial.records[i].predicted_ranks == full.records[i].predicted_ranks);
            CHECK(partial.records[i].team_values == full.records[i].team_values);
        }

        // Resuming the suffix on the same engine matches the full stream.
        ReplayEngine engine(cfg);
        for (std::size_t i = 0; i < 25; ++i) engine.process(log.matches[i]);
        for (std::size_t i = 25; i < log.matches.size(); ++i) engine.process(log.matches[i]);
        const ReplayResult resumed = engine.take_result();
        REQUIRE(resumed.records.size() == full.records.size());
        for (std::size_t i = 0; i < full.records.size(); ++i) {
            CHECK(resumed.records[i].predicted_ranks == full.records[i].predicted_ranks);
        }
    }

    TEST_CASE("replay is deterministic for a fixed seed") {
        const MatchLog log = synthesize({.players = 20,
                                         .matches = 30,
                                         .teams_per_match = 3,
                                         .team_size = 2,
                                         .mode = Mode::FreeForAll,
                                         .rank_noise = 0.5,
                                         .seed = 10});
        auto cfg = synthetic_replay_config({"trueskill", "naive"}, 77);
        cfg.mode = Mode::FreeForAll;
        std::array<bool, kRawStatCount> stats{};
        stats.fill(true);
        cfg.features = FeatureSet::from_raw_stats(stats, Mode::FreeForAll);

        const ReplayResult a = run_replay(log.matches, cfg);
        const ReplayResult b = run_replay(log.matches, cfg);
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            CHECK(a.records[i].predicted_ranks == b.records[i].predicted_ranks);
            CHECK(a.records[i].tie_break_seed == b.records[i].tie_break_seed);
        }
        const SetupReport ra = score_setup(a, SetupSpec::all_players());
        const SetupReport rb = score_setup(b, SetupSpec::all_players());
        CHECK(ra.scores == rb.scores);
        CHECK(ra.metric == "ndcg");
    }

    TEST_CASE("windowed setups score a match once via any selected player") {
        // p1..p4 rotate; windows select early games only.
        std::vector<MatchRecord> matches;
        for (int i = 0; i < 8; ++i) {
            matches.push_back(duel("m" + std::to_string(i), 100 * (i + 1), "a", "b"));
        }
        auto cfg = synthetic_replay_config({"elo"});
        const ReplayResult result = run_replay(matches, cfg);

        SetupSpec spec = SetupSpec::frequent();
        spec.min_games = 5; // both a and b qualify with 8 games
        spec.window = 3;    // only their first 3 games count
        const SetupReport report = score_setup(result, spec);
        CHECK(report.matches_scored == 3);
        CHECK(report.players_selected == 2);

        SetupSpec nobody = SetupSpec::frequent();
        nobody.min_games = 100;
        const SetupReport empty = score_setup(result, nobody);
        CHECK(empty.matches_scored == 0);
        CHECK(empty.players_selected == 0);
        CHECK_FALSE(empty.scores.at("elo").has_value());
    }

    TEST_CASE("drawn head-to-head matches are excluded from accuracy scoring") {
        std::vector<MatchRecord> matches = {duel("m1", 100, "a", "b")};
        MatchRecord draw = duel("m2", 200, "a", "b");
        draw.teams[0].rank = 1;
        draw.teams[1].rank = 1;
        matches.push_back(draw);
        matches.push_back(duel("m3", 300, "a", "b"));

        const ReplayResult result = run_replay(matches, synthetic_replay_config({"elo"}));
        const SetupReport report = score_setup(result, SetupSpec::all_players());
        CHECK(report.matches_scored == 2);
    }
}

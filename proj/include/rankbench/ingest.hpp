#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "rankbench/features.hpp"
#include "rankbench/match_log.hpp"
#include "rankbench/types.hpp"

namespace rankbench {

// Which raw quantities a dataset records and which mode it plays.
struct DatasetSchema {
    std::string name;
    Mode mode = Mode::HeadToHead;
    std::array<bool, kRawStatCount> stats{};
    int enforced_team_size = 0; // 0 = unconstrained

    FeatureSet feature_set() const { return FeatureSet::from_raw_stats(stats, mode); }
};

const DatasetSchema& dataset_schema(const std::string& name); // throws on unknown
std::vector<std::string> dataset_names();

// CSV with a header row: match_id, timestamp_ms, team_slot, team_rank,
// player_id, then one column per raw stat the schema records. One row per
// player-match. Output is sorted by (timestamp, match_id).
MatchLog ingest_csv(std::istream& in, const std::string& schema_name);
MatchLog ingest_csv_file(const std::string& path, const std::string& schema_name);

} // namespace rankbench

#include "rankbench/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rankbench/error.hpp"

namespace rankbench {

namespace {

std::array<bool, kRawStatCount> stat_mask(std::initializer_list<RawStat> stats) {
    std::array<bool, kRawStatCount> mask{};
    for (RawStat s : stats) mask[static_cast<std::size_t>(static_cast<int>(s))] = true;
    return mask;
}

std::array<bool, kRawStatCount> all_stats() {
    std::array<bool, kRawStatCount> mask{};
    mask.fill(true);
    return mask;
}

const std::vector<DatasetSchema>& schemas() {
    static const std::vector<DatasetSchema> all = {
        {"halo_slayer", Mode::HeadToHead,
         stat_mask({RawStat::Kills, RawStat::Deaths, RawStat::Headshots, RawStat::LongestSpree,
                    RawStat::TimeAlive, RawStat::MeleeKills, RawStat::GrenadeKills,
                    RawStat::KillAssists, RawStat::Betrayals, RawStat::Suicides}),
         0},
        {"halo_ctf", Mode::HeadToHead,
         stat_mask({RawStat::Kills, RawStat::Deaths, RawStat::Headshots, RawStat::MeleeKills,
                    RawStat::GrenadeKills, RawStat::KillAssists, RawStat::FlagSteals,
                    RawStat::Betrayals, RawStat::Suicides}),
         0},
        {"csgo", Mode::HeadToHead,
         stat_mask({RawStat::Kills, RawStat::Deaths, RawStat::Headshots, RawStat::DamageDealt,
                    RawStat::KillAssists, RawStat::FlashAssists}),
         0},
        {"pubg_duo", Mode::FreeForAll,
         stat_mask({RawStat::Kills, RawStat::Deaths, RawStat::DamageDealt, RawStat::Dbno,
                    RawStat::TimeAlive, RawStat::WalkDistance, RawStat::RideDistance}),
         2},
        {"synthetic", Mode::HeadToHead, all_stats(), 0},
    };
    return all;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_number(const std::string& text, std::size_t line_no, const std::string& column) {
    try {
        std::size_t consumed = 0;
        const double value = std::stod(text, &consumed);
        if (consumed != text.size() || !std::isfinite(value)) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ValidationError("line " + std::to_string(line_no) + ": column '" + column +
                              "': not a number: '" + text + "'");
    }
}

struct PendingMatch {
    int64_t timestamp_ms = 0;
    std::map<int, TeamEntry> teams;
};

} // namespace

const DatasetSchema& dataset_schema(const std::string& name) {
    for (const auto& schema : schemas()) {
        if (schema.name == name) return schema;
    }
    throw ValidationError("unknown dataset schema '" + name + "'");
}

std::vector<std::string> dataset_names() {
    std::vector<std::string> names;
    for (const auto& schema : schemas()) names.push_back(schema.name);
    return names;
}

MatchLog ingest_csv(std::istream& in, const std::string& schema_name) {
    const DatasetSchema& schema = dataset_schema(schema_name);

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty input, expected a CSV header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_csv_line(line);

    auto column_of = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw ValidationError("missing required column '" + name + "' for schema '" +
                              schema_name + "'");
    };

    const std::size_t col_match = column_of("match_id");
    const std::size_t col_ts = column_of("timestamp_ms");
    const std::size_t col_slot = column_of("team_slot");
    const std::size_t col_rank = column_of("team_rank");
    const std::size_t col_player = column_of("player_id");
    std::vector<std::pair<RawStat, std::size_t>> stat_columns;
    for (int i = 0; i < kRawStatCount; ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (schema.stats[idx]) {
            stat_columns.emplace_back(static_cast<RawStat>(i), column_of(raw_stat_names()[idx]));
        }
    }

    std::map<std::string, PendingMatch> pending;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() < header.size()) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
        }

        const std::string& match_id = fields[col_match];
        if (match_id.empty()) {
            throw ValidationError("line " + std::to_string(line_no) + ": empty match_id");
        }
        PendingMatch& match = pending[match_id];
        const auto ts =
            static_cast<int64_t>(parse_number(fields[col_ts], line_no, "timestamp_ms"));
        if (match.teams.empty()) {
            match.timestamp_ms = ts;
        } else if (match.timestamp_ms != ts) {
            throw ValidationError("line " + std::to_string(line_no) + ": match '" + match_id +
                                  "' has conflicting timestamps");
        }

        const int slot = static_cast<int>(parse_number(fields[col_slot], line_no, "team_slot"));
        const int rank = static_cast<int>(parse_number(fields[col_rank], line_no, "team_rank"));
        TeamEntry& team = match.teams[slot];
        if (team.members.empty()) {
            team.slot = slot;
            team.rank = rank;
        } else if (team.rank != rank) {
            throw ValidationError("line " + std::to_string(line_no) + ": match '" + match_id +
                                  "' slot " + std::to_string(slot) + " has conflicting ranks");
        }

        RawMatchStats stats;
        for (const auto& [stat, column] : stat_columns) {
            stats.set(stat, parse_number(fields[column], line_no,
                                         raw_stat_names()[static_cast<std::size_t>(
                                             static_cast<int>(stat))]));
        }
        team.members.emplace_back(fields[col_player], std::move(stats));
    }

    MatchLog log;
    log.dataset = schema.name;
    log.mode = schema.mode;
    for (auto& [match_id, match] : pending) {
        MatchRecord record;
        record.match_id = match_id;
        record.timestamp_ms = match.timestamp_ms;
        record.mode = schema.mode;
        for (auto& [slot, team] : match.teams) {
            if (schema.enforced_team_size > 0 &&
                static_cast<int>(team.members.size()) != schema.enforced_team_size) {
                throw ValidationError("match '" + match_id + "': schema '" + schema.name +
                                      "' requires teams of " +
                                      std::to_string(schema.enforced_team_size) + ", slot " +
                                      std::to_string(slot) + " has " +
                                      std::to_string(team.members.size()));
            }
            record.teams.push_back(std::move(team));
        }
        validate_match(record);
        log.matches.push_back(std::move(record));
    }
    std::sort(log.matches.begin(), log.matches.end(), [](const auto& a, const auto& b) {
        if (a.timestamp_ms != b.timestamp_ms) return a.timestamp_ms < b.timestamp_ms;
        return a.match_id < b.match_id;
    });
    return log;
}

MatchLog ingest_csv_file(const std::string& path, const std::string& schema_name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return ingest_csv(in, schema_name);
}

} // namespace rankbench

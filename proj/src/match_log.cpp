#include "rankbench/match_log.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rankbench/error.hpp"

namespace rankbench {

namespace {

using nlohmann::json;

constexpr int kLogVersion = 1;

json stats_to_json(const RawMatchStats& stats) {
    json out = json::object();
    for (int i = 0; i < kRawStatCount; ++i) {
        auto idx = static_cast<std::size_t>(i);
        if (stats.present[idx]) out[raw_stat_names()[idx]] = stats.values[idx];
    }
    return out;
}

RawMatchStats stats_from_json(const json& j) {
    RawMatchStats stats;
    for (const auto& [key, value] : j.items()) {
        const auto stat = raw_stat_from_name(key);
        if (!stat) throw ValidationError("unknown raw stat '" + key + "'");
        stats.set(*stat, value.get<double>());
    }
    return stats;
}

} // namespace

std::string encode_match(const MatchRecord& record) {
    json teams = json::array();
    for (const auto& team : record.teams) {
        json members = json::array();
        for (const auto& [player, stats] : team.members) {
            members.push_back({{"player", player}, {"stats", stats_to_json(stats)}});
        }
        teams.push_back({{"slot", team.slot}, {"rank", team.rank}, {"members", members}});
    }
    const json j = {{"match_id", record.match_id},
                    {"timestamp_ms", record.timestamp_ms},
                    {"mode", to_string(record.mode)},
                    {"teams", teams}};
    return j.dump();
}

MatchRecord decode_match(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& err) {
        throw ValidationError(std::string("match log parse error: ") + err.what());
    }
    MatchRecord record;
    record.match_id = j.at("match_id").get<std::string>();
    record.timestamp_ms = j.at("timestamp_ms").get<int64_t>();
    record.mode = mode_from_string(j.at("mode").get<std::string>());
    for (const auto& team_json : j.at("teams")) {
        TeamEntry team;
        team.slot = team_json.at("slot").get<int>();
        team.rank = team_json.at("rank").get<int>();
        for (const auto& member : team_json.at("members")) {
            team.members.emplace_back(member.at("player").get<std::string>(),
                                      stats_from_json(member.at("stats")));
        }
        record.teams.push_back(std::move(team));
    }
    return record;
}

void write_match_log(std::ostream& out, const MatchLog& log) {
    const json header = {{"schema", "rankbench.matchlog"},
                         {"version", kLogVersion},
                         {"dataset", log.dataset},
                         {"mode", to_string(log.mode)}};
    out << header.dump() << '\n';
    for (const auto& match : log.matches) out << encode_match(match) << '\n';
}

MatchLog read_match_log(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("match log is empty");
    json header;
    try {
        header = json::parse(line);
    } catch (const json::parse_error& err) {
        throw ValidationError(std::string("match log header: ") + err.what());
    }
    if (header.value("schema", "") != "rankbench.matchlog") {
        throw ValidationError("not a match log (bad schema header)");
    }
    if (header.value("version", 0) != kLogVersion) {
        throw ValidationError("unsupported match log version");
    }

    MatchLog log;
    log.dataset = header.at("dataset").get<std::string>();
    log.mode = mode_from_string(header.at("mode").get<std::string>());

    int64_t last_ts = 0;
    std::string last_id;
    bool any = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        MatchRecord record;
        try {
            record = decode_match(line);
        } catch (const ValidationError& err) {
            throw ValidationError("line " + std::to_string(line_no) + ": " + err.what());
        }
        validate_match(record);
        if (any && (record.timestamp_ms < last_ts ||
                    (record.timestamp_ms == last_ts && record.match_id < last_id))) {
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": matches out of timestamp order");
        }
        any = true;
        last_ts = record.timestamp_ms;
        last_id = record.match_id;
        log.matches.push_back(std::move(record));
    }
    return log;
}

void save_match_log(const std::string& path, const MatchLog& log) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_match_log(out, log);
    if (!out) throw IoError("failed writing '" + path + "'");
}

MatchLog load_match_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_match_log(in);
}

} // namespace rankbench

#include "rankbench/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rankbench/error.hpp"

namespace rankbench {

namespace {

using nlohmann::json;

constexpr int kReportVersion = 1;

} // namespace

std::string report_to_json(const EvalReport& report) {
    json setups = json::array();
    for (const auto& setup : report.setups) {
        json scores = json::object();
        for (const auto& [source, score] : setup.scores) {
            if (score) {
                scores[source] = *score;
            } else {
                scores[source] = nullptr;
            }
        }
        json entry = {{"name", setup.name},
                      {"metric", setup.metric},
                      {"matches_scored", setup.matches_scored},
                      {"scores", scores}};
        if (setup.players_selected >= 0) entry["players_selected"] = setup.players_selected;
        setups.push_back(std::move(entry));
    }
    const json j = {{"schema", "rankbench.report"},
                    {"version", kReportVersion},
                    {"dataset", report.dataset},
                    {"mode", to_string(report.mode)},
                    {"seed", report.seed},
                    {"config_hash", report.config_hash},
                    {"sources", report.sources},
                    {"setups", setups}};
    return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ValidationError(std::string("report: ") + err.what());
    }
    if (j.value("schema", "") != "rankbench.report") {
        throw ValidationError("not a report file (bad schema header)");
    }
    if (j.value("version", 0) != kReportVersion) {
        throw ValidationError("unsupported report version");
    }
    EvalReport report;
    report.dataset = j.value("dataset", "");
    report.mode = mode_from_string(j.at("mode").get<std::string>());
    report.seed = j.value("seed", 0ull);
    report.config_hash = j.value("config_hash", "");
    for (const auto& source : j.at("sources")) report.sources.push_back(source.get<std::string>());
    for (const auto& setup_json : j.at("setups")) {
        SetupReport setup;
        setup.name = setup_json.at("name").get<std::string>();
        setup.metric = setup_json.at("metric").get<std::string>();
        setup.matches_scored = setup_json.value("matches_scored", 0);
        setup.players_selected = setup_json.value("players_selected", -1);
        for (const auto& [source, score] : setup_json.at("scores").items()) {
            if (score.is_null()) {
                setup.scores[source] = std::nullopt;
            } else {
                setup.scores[source] = score.get<double>();
            }
        }
        report.setups.push_back(std::move(setup));
    }
    return report;
}

void save_report(const std::string& path, const EvalReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << report_to_json(report);
    if (!out) throw IoError("failed writing '" + path + "'");
}

EvalReport load_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return report_from_json(ss.str());
}

std::string report_to_table(const EvalReport& report) {
    const std::string metric = report.setups.empty() ? "" : report.setups.front().metric;
    std::ostringstream out;
    out << "dataset: " << report.dataset << "  (%" << metric << ")\n";
    out << "config:  " << report.config_hash << "\n\n";

    std::size_t name_width = 12;
    for (const auto& setup : report.setups) name_width = std::max(name_width, setup.name.size());
    std::vector<std::size_t> widths;
    for (const auto& source : report.sources) widths.push_back(std::max<std::size_t>(7, source.size()));

    out << std::string(name_width, ' ');
    for (std::size_t i = 0; i < report.sources.size(); ++i) {
        out << "  ";
        out << std::string(widths[i] - report.sources[i].size(), ' ') << report.sources[i];
    }
    out << "  matches\n";

    for (const auto& setup : report.setups) {
        out << setup.name << std::string(name_width - setup.name.size(), ' ');
        for (std::size_t i = 0; i < report.sources.size(); ++i) {
            std::string cell = "-";
            auto it = setup.scores.find(report.sources[i]);
            if (it != setup.scores.end() && it->second) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.1f", *it->second * 100.0);
                cell = buf;
            }
            out << "  " << std::string(widths[i] - cell.size(), ' ') << cell;
        }
        out << "  " << setup.matches_scored << "\n";
    }
    return out.str();
}

} // namespace rankbench

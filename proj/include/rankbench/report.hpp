#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rankbench/replay.hpp"

namespace rankbench {

struct EvalReport {
    std::string dataset;
    Mode mode = Mode::HeadToHead;
    uint64_t seed = 0;
    std::string config_hash;
    std::vector<std::string> sources;
    std::vector<SetupReport> setups;
};

// Deterministic machine form: identical reports serialize byte-identically.
std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);
void save_report(const std::string& path, const EvalReport& report);
EvalReport load_report(const std::string& path);

// Plain-text table, setups as rows and sources as columns, scores in %.
std::string report_to_table(const EvalReport& report);

} // namespace rankbench

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rankbench/types.hpp"

namespace rankbench {

// Line-delimited UTF-8: a schema-version header line, then one match per
// line, nondecreasing in (timestamp, match_id).
struct MatchLog {
    std::string dataset;
    Mode mode = Mode::HeadToHead;
    std::vector<MatchRecord> matches;
};

std::string encode_match(const MatchRecord& record);
MatchRecord decode_match(const std::string& line);

void write_match_log(std::ostream& out, const MatchLog& log);
MatchLog read_match_log(std::istream& in);

void save_match_log(const std::string& path, const MatchLog& log);
MatchLog load_match_log(const std::string& path);

} // namespace rankbench

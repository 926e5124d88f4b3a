#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rankbench {

// Player-match observations. Binary targets live in `target` as 0/1;
// ordinal targets are 1-based performance levels (higher = better).
// `group` carries the match id a row came from: folds split on it and
// ordinal scoring ranks rows within it.
struct DesignMatrix {
    std::vector<std::string> column_ids;
    std::vector<double> values; // row-major, rows x cols
    std::vector<int> target;
    std::vector<std::string> group;
    std::vector<int> observed_rank; // within-group rank, 1 = best (ordinal scoring)
    std::vector<int> group_team_count;

    std::size_t rows() const { return column_ids.empty() ? 0 : values.size() / column_ids.size(); }
    std::size_t cols() const { return column_ids.size(); }
    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }

    void check() const; // unique columns, finite cells, consistent sizes
};

} // namespace rankbench

/**
 * @file guiding_point.hpp
 * @brief Observation records (well readings) that constrain reconstruction
 */

#pragma once

#include <optional>
#include <vector>

#include "gvflow/field.hpp"

namespace gvflow {

/**
 * @brief One well observation.
 *
 * `cell` is empty until the point has been located on a grid. `count`
 * records how many raw records were merged into this point.
 */
struct GuidingPoint {
    double value = 0.0;
    double lat = 0.0;
    double lon = 0.0;
    std::optional<int> time_index;
    std::optional<CellIndex> cell;
    int count = 1;

    /// A point placed directly in grid space (no geographic position).
    static GuidingPoint at_cell(int row, int col, double value) {
        GuidingPoint p;
        p.value = value;
        p.cell = CellIndex{row, col};
        return p;
    }
};

/// All observations sharing one time index.
struct Snapshot {
    int time_index = 0;
    std::vector<GuidingPoint> points;
};

} // namespace gvflow

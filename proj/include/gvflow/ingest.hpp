/**
 * @file ingest.hpp
 * @brief Well-log parsing and plate carree gridding of observations
 *
 * Well-log format: UTF-8 text, one record per line, `value lat lon [time]`
 * separated by commas or runs of whitespace. Lines whose first non-blank
 * character is '#' and blank lines are ignored.
 */

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gvflow/error.hpp"
#include "gvflow/field.hpp"
#include "gvflow/guiding_point.hpp"

namespace gvflow {

class ParseError : public Error {
public:
    ParseError(int line, std::string token, const std::string& reason);
    int line() const { return line_; }
    const std::string& token() const { return token_; }

private:
    int line_;
    std::string token_;
};

/// Parses a well log; records come back in file order.
std::vector<GuidingPoint> parse_well_log(std::istream& in);
std::vector<GuidingPoint> parse_well_log(std::string_view text);

/// Writes records in the well-log format with round-trip precision.
std::string serialize_well_log(std::span<const GuidingPoint> points);

/**
 * @brief Latitude/longitude box, optionally with a cell resolution.
 *
 * Rows run along latitude (row 0 at lat_min), columns along longitude.
 * Cells are square in degrees; rows and cols cover the box, so the grid
 * may overhang lat_max/lon_max by less than one cell.
 */
struct GeoGrid {
    double lat_min = 0.0;
    double lat_max = 0.0;
    double lon_min = 0.0;
    double lon_max = 0.0;
    double lat_det = 0.0;
    double lon_det = 0.0;
    int rows = 0;
    int cols = 0;

    bool resolved() const { return rows > 0 && cols > 0; }
    bool contains(double lat, double lon) const {
        return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
    }
    GeoRef georef() const { return {lat_min, lon_min, lat_det, lon_det}; }
};

/// Tight min/max box; no resolution. Throws std::invalid_argument when empty.
GeoGrid bounding_box(std::span<const GuidingPoint> points);

/**
 * @brief Picks square cells so rows*cols is the largest count <= target_cells
 * whose rows/cols ratio tracks the box's lat/lon extent ratio.
 *
 * A zero-extent axis is first padded on both sides by one cell of the
 * other axis (or by 0.01 degree when the box is a single point).
 * Throws std::invalid_argument for target_cells < 4 or an inverted box.
 */
GeoGrid determine_resolution(const GeoGrid& box, int target_cells);

/// Default padding applied to a single-point box, in degrees.
inline constexpr double kPointBoxPadding = 0.01;

/**
 * @brief Assigns grid cells and merges points that share a cell and time index.
 *
 * row = floor((lat - lat_min) / lat_det), clamped into [0, rows); likewise
 * for columns. Merged points average their values and sum their counts;
 * output keeps first-appearance order. Throws std::invalid_argument for
 * points outside the box.
 */
std::vector<GuidingPoint> locate(std::span<const GuidingPoint> points, const GeoGrid& grid);

/**
 * @brief Splits records into snapshots of equal time index.
 *
 * Records without a time index all go to one snapshot with time 0.
 * Throws std::invalid_argument when time indices decrease in file order
 * or a time index reappears after another one, or when only some records
 * carry a time.
 */
std::vector<Snapshot> group_snapshots(std::span<const GuidingPoint> points);

/// First pair of records at identical (lat, lon, time) with different values.
std::optional<std::pair<std::size_t, std::size_t>> find_coincident_conflict(
    std::span<const GuidingPoint> points);

} // namespace gvflow

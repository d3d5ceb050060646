/**
 * @file ingest.cpp
 * @brief Well-log reader/writer, bounding boxes, resolution and location
 */

#include "gvflow/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace gvflow {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, int line_no) {
    std::vector<std::string_view> fields;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
    auto trim = [&](std::string_view s) {
        while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
        while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
        return s;
    };
    if (line.find(',') != std::string_view::npos) {
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const auto field = trim(line.substr(start, comma - start));
            if (field.empty()) throw ParseError(line_no, "", "empty field");
            fields.push_back(field);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return fields;
    }
    std::size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && is_space(line[k])) ++k;
        const std::size_t start = k;
        while (k < line.size() && !is_space(line[k])) ++k;
        if (k > start) fields.push_back(line.substr(start, k - start));
    }
    return fields;
}

double parse_real(std::string_view token, int line_no) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ParseError(line_no, std::string(token), "not a number");
    }
    return v;
}

int parse_time(std::string_view token, int line_no) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || v < 0) {
        throw ParseError(line_no, std::string(token), "time index must be a non-negative integer");
    }
    return v;
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ParseError::ParseError(int line, std::string token, const std::string& reason)
    : Error("line " + std::to_string(line) + ": " + reason +
            (token.empty() ? std::string() : " '" + token + "'")),
      line_(line),
      token_(std::move(token)) {}

std::vector<GuidingPoint> parse_well_log(std::istream& in) {
    std::vector<GuidingPoint> points;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        const auto first = view.find_first_not_of(" \t\r\v\f");
        if (first == std::string_view::npos || view[first] == '#') continue;

        const auto fields = split_fields(view, line_no);
        if (fields.size() < 3 || fields.size() > 4) {
            throw ParseError(line_no, fields.empty() ? "" : std::string(fields.back()),
                             "expected 3 or 4 fields, found " + std::to_string(fields.size()) +
                                 " near");
        }
        GuidingPoint p;
        p.value = parse_real(fields[0], line_no);
        p.lat = parse_real(fields[1], line_no);
        p.lon = parse_real(fields[2], line_no);
        if (p.lat < -90.0 || p.lat > 90.0) {
            throw ParseError(line_no, std::string(fields[1]), "latitude out of [-90, 90]");
        }
        if (p.lon < -180.0 || p.lon > 180.0) {
            throw ParseError(line_no, std::string(fields[2]), "longitude out of [-180, 180]");
        }
        if (fields.size() == 4) p.time_index = parse_time(fields[3], line_no);
        points.push_back(p);
    }
    return points;
}

std::vector<GuidingPoint> parse_well_log(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_well_log(in);
}

std::string serialize_well_log(std::span<const GuidingPoint> points) {
    std::string out;
    for (const auto& p : points) {
        out += format_real(p.value) + ' ' + format_real(p.lat) + ' ' + format_real(p.lon);
        if (p.time_index) out += ' ' + std::to_string(*p.time_index);
        out += '\n';
    }
    return out;
}

GeoGrid bounding_box(std::span<const GuidingPoint> points) {
    if (points.empty()) throw std::invalid_argument("bounding box of no points");
    GeoGrid g;
    g.lat_min = g.lat_max = points.front().lat;
    g.lon_min = g.lon_max = points.front().lon;
    for (const auto& p : points) {
        g.lat_min = std::min(g.lat_min, p.lat);
        g.lat_max = std::max(g.lat_max, p.lat);
        g.lon_min = std::min(g.lon_min, p.lon);
        g.lon_max = std::max(g.lon_max, p.lon);
    }
    return g;
}

GeoGrid determine_resolution(const GeoGrid& box, int target_cells) {
    if (target_cells < 4) throw std::invalid_argument("target cell count must be at least 4");
    GeoGrid g = box;
    double lat_ext = g.lat_max - g.lat_min;
    double lon_ext = g.lon_max - g.lon_min;
    if (!(lat_ext >= 0.0) || !(lon_ext >= 0.0) || !std::isfinite(lat_ext) ||
        !std::isfinite(lon_ext)) {
        throw std::invalid_argument("bounding box is inverted or not finite");
    }

    // Degenerate axes grow by one cell on each side.
    const double per_axis = std::floor(std::sqrt(static_cast<double>(target_cells)));
    if (lat_ext == 0.0 || lon_ext == 0.0) {
        const double longest = std::max(lat_ext, lon_ext);
        const double pad = longest > 0.0 ? longest / per_axis : kPointBoxPadding;
        if (lat_ext == 0.0) {
            g.lat_min -= pad;
            g.lat_max += pad;
        }
        if (lon_ext == 0.0) {
            g.lon_min -= pad;
            g.lon_max += pad;
        }
        lat_ext = g.lat_max - g.lat_min;
        lon_ext = g.lon_max - g.lon_min;
        if (!(lat_ext > 0.0) || !(lon_ext > 0.0)) {
            throw std::invalid_argument("bounding box is degenerate after expansion");
        }
    }

    const double aspect = lat_ext / lon_ext;
    long best = 0;
    int best_rows = 1;
    int best_cols = 1;
    for (int cols = 1; cols <= target_cells; ++cols) {
        const int rows = std::max(1, static_cast<int>(std::lround(cols * aspect)));
        const long cells = static_cast<long>(rows) * cols;
        if (cells > target_cells) break;
        if (cells > best) {
            best = cells;
            best_rows = rows;
            best_cols = cols;
        }
    }

    const double det = std::max(lat_ext / best_rows, lon_ext / best_cols);
    // Guard the ceilings against division round-off right at an integer.
    auto cover = [det](double extent) {
        const double n = extent / det;
        const double r = std::round(n);
        return std::max(1, static_cast<int>(std::abs(n - r) < 1e-9 * std::max(1.0, r) ? r : std::ceil(n)));
    };
    g.lat_det = det;
    g.lon_det = det;
    g.rows = cover(lat_ext);
    g.cols = cover(lon_ext);
    return g;
}

std::vector<GuidingPoint> locate(std::span<const GuidingPoint> points, const GeoGrid& grid) {
    if (!grid.resolved() || !(grid.lat_det > 0.0) || !(grid.lon_det > 0.0)) {
        throw std::invalid_argument("grid resolution has not been determined");
    }
    std::vector<GuidingPoint> out;
    std::map<std::tuple<int, int, int>, std::size_t> slot;  // (time, row, col) -> output index
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& p = points[k];
        if (!grid.contains(p.lat, p.lon)) {
            throw std::invalid_argument("point " + std::to_string(k + 1) + " (" +
                                        format_real(p.lat) + ", " + format_real(p.lon) +
                                        ") lies outside the grid box");
        }
        const int row = std::clamp(static_cast<int>(std::floor((p.lat - grid.lat_min) / grid.lat_det)),
                                   0, grid.rows - 1);
        const int col = std::clamp(static_cast<int>(std::floor((p.lon - grid.lon_min) / grid.lon_det)),
                                   0, grid.cols - 1);
        const auto key = std::make_tuple(p.time_index.value_or(-1), row, col);
        const auto found = slot.find(key);
        if (found == slot.end()) {
            slot.emplace(key, out.size());
            GuidingPoint q = p;
            q.cell = CellIndex{row, col};
            out.push_back(q);
        } else {
            GuidingPoint& q = out[found->second];
            const int total = q.count + p.count;
            q.value = (q.value * q.count + p.value * p.count) / total;
            q.count = total;
        }
    }
    return out;
}

std::vector<Snapshot> group_snapshots(std::span<const GuidingPoint> points) {
    std::vector<Snapshot> out;
    if (points.empty()) return out;
    const bool timed = points.front().time_index.has_value();
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& p = points[k];
        if (p.time_index.has_value() != timed) {
            throw std::invalid_argument("record " + std::to_string(k + 1) +
                                        ": time column present on some records only");
        }
        const int t = p.time_index.value_or(0);
        if (out.empty() || out.back().time_index != t) {
            if (!out.empty() && t < out.back().time_index) {
                throw std::invalid_argument("record " + std::to_string(k + 1) + ": time " +
                                            std::to_string(t) + " follows time " +
                                            std::to_string(out.back().time_index));
            }
            out.push_back(Snapshot{t, {}});
        }
        out.back().points.push_back(p);
    }
    return out;
}

std::optional<std::pair<std::size_t, std::size_t>> find_coincident_conflict(
    std::span<const GuidingPoint> points) {
    std::map<std::tuple<int, double, double>, std::size_t> first_seen;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& p = points[k];
        const auto key = std::make_tuple(p.time_index.value_or(-1), p.lat, p.lon);
        const auto [it, inserted] = first_seen.emplace(key, k);
        if (!inserted && points[it->second].value != p.value) return std::make_pair(it->second, k);
    }
    return std::nullopt;
}

} // namespace gvflow

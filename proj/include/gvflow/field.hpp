/**
 * @file field.hpp
 * @brief Row-major real-valued grids (hydraulic head and friends)
 *
 * Row 0 is the southern edge (lat_min); column 0 is the western edge
 * (lon_min). Exporters flip rows so that north is written first.
 */

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gvflow {

struct CellIndex {
    int row = 0;
    int col = 0;

    auto operator<=>(const CellIndex&) const = default;
};

/// Geographic placement of a grid: south-west corner and cell sizes in degrees.
struct GeoRef {
    double lat_min = 0.0;
    double lon_min = 0.0;
    double lat_det = 1.0;
    double lon_det = 1.0;

    double cell_center_lat(int row) const { return lat_min + (row + 0.5) * lat_det; }
    double cell_center_lon(int col) const { return lon_min + (col + 0.5) * lon_det; }

    bool operator==(const GeoRef&) const = default;
};

/**
 * @brief Real value per grid cell, stored row-major.
 *
 * Used for hydraulic head, partial derivatives, residuals and per-cell
 * source terms alike.
 */
class HeadField {
public:
    HeadField() = default;
    HeadField(int rows, int cols, double fill = 0.0);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    double& operator()(int row, int col) { return values_[index(row, col)]; }
    double operator()(int row, int col) const { return values_[index(row, col)]; }
    double& operator[](CellIndex c) { return (*this)(c.row, c.col); }
    double operator[](CellIndex c) const { return (*this)(c.row, c.col); }

    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(col);
    }
    bool contains(CellIndex c) const {
        return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_;
    }
    bool is_boundary(int row, int col) const {
        return row == 0 || col == 0 || row == rows_ - 1 || col == cols_ - 1;
    }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    const std::optional<GeoRef>& georef() const { return georef_; }
    void set_georef(std::optional<GeoRef> g) { georef_ = g; }

    bool same_shape(const HeadField& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    bool all_finite() const;
    double min_value() const;
    double max_value() const;

    /// Bitwise equality of shape and values (georef ignored).
    bool operator==(const HeadField& other) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> values_;
    std::optional<GeoRef> georef_;
};

/// Largest |a - b| over all cells; shapes must match.
double max_abs_difference(const HeadField& a, const HeadField& b);

} // namespace gvflow

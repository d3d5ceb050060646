/**
 * @file raster_export.hpp
 * @brief Writers for plain PGM, ESRI ASCII grid and CSV, plus a CSV reader
 *
 * All writers emit the northernmost row first (PGM, ASCII grid) and use
 * fixed formatting, so identical fields produce identical bytes.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "gvflow/field.hpp"

namespace gvflow {

enum class ExportFormat { pgm, asciigrid, csv };

/// Accepts "pgm", "asciigrid" or "csv"; throws std::invalid_argument otherwise.
ExportFormat parse_export_format(std::string_view name);
std::string_view file_extension(ExportFormat format);

struct ExportOptions {
    /// PGM only: bright pixels for low values.
    bool invert = false;
};

/**
 * PGM: "P2", width height, maxval 255, values scaled so the minimum is 0
 * and the maximum 255 (a constant field is all 0).
 * ASCII grid: ncols/nrows/xllcorner/yllcorner/cellsize/NODATA_value header.
 * CSV: header "i,j,lat,lon,value", one row per cell, 12 significant digits.
 * Fields without a georef use index coordinates (origin 0, cell size 1).
 */
void export_field(const HeadField& field, ExportFormat format, std::ostream& out,
                  const ExportOptions& options = {});
void export_field(const HeadField& field, ExportFormat format, const std::filesystem::path& path,
                  const ExportOptions& options = {});

/// Reads the CSV layout written above back into a field (no georef).
HeadField read_field_csv(std::istream& in);

} // namespace gvflow

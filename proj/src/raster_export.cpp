#include "gvflow/raster_export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "gvflow/error.hpp"

namespace gvflow {

namespace {

std::string g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

GeoRef georef_or_index(const HeadField& f) {
    return f.georef().value_or(GeoRef{0.0, 0.0, 1.0, 1.0});
}

void write_pgm(const HeadField& f, std::ostream& out, bool invert) {
    const double lo = f.min_value();
    const double hi = f.max_value();
    const double range = hi - lo;
    out << "P2\n" << f.cols() << ' ' << f.rows() << "\n255\n";
    for (int i = f.rows() - 1; i >= 0; --i) {
        for (int j = 0; j < f.cols(); ++j) {
            int pixel = range > 0.0 ? static_cast<int>(std::lround((f(i, j) - lo) / range * 255.0)) : 0;
            pixel = std::clamp(pixel, 0, 255);
            if (invert && range > 0.0) pixel = 255 - pixel;
            out << pixel << (j + 1 < f.cols() ? ' ' : '\n');
        }
    }
}

void write_asciigrid(const HeadField& f, std::ostream& out) {
    const GeoRef g = georef_or_index(f);
    out << "ncols " << f.cols() << '\n' << "nrows " << f.rows() << '\n';
    out << "xllcorner " << g12(g.lon_min) << '\n' << "yllcorner " << g12(g.lat_min) << '\n';
    if (g.lat_det == g.lon_det) {
        out << "cellsize " << g12(g.lon_det) << '\n';
    } else {
        out << "dx " << g12(g.lon_det) << '\n' << "dy " << g12(g.lat_det) << '\n';
    }
    out << "NODATA_value -9999\n";
    for (int i = f.rows() - 1; i >= 0; --i) {
        for (int j = 0; j < f.cols(); ++j) out << g12(f(i, j)) << (j + 1 < f.cols() ? ' ' : '\n');
    }
}

void write_csv(const HeadField& f, std::ostream& out) {
    const GeoRef g = georef_or_index(f);
    out << "i,j,lat,lon,value\n";
    for (int i = 0; i < f.rows(); ++i) {
        for (int j = 0; j < f.cols(); ++j) {
            out << i << ',' << j << ',' << g12(g.cell_center_lat(i)) << ','
                << g12(g.cell_center_lon(j)) << ',' << g12(f(i, j)) << '\n';
        }
    }
}

} // namespace

ExportFormat parse_export_format(std::string_view name) {
    if (name == "pgm") return ExportFormat::pgm;
    if (name == "asciigrid") return ExportFormat::asciigrid;
    if (name == "csv") return ExportFormat::csv;
    throw std::invalid_argument("unknown export format '" + std::string(name) + "'");
}

std::string_view file_extension(ExportFormat format) {
    switch (format) {
    case ExportFormat::pgm: return "pgm";
    case ExportFormat::asciigrid: return "asc";
    case ExportFormat::csv: return "csv";
    }
    return "dat";
}

void export_field(const HeadField& field, ExportFormat format, std::ostream& out,
                  const ExportOptions& options) {
    if (field.empty()) throw std::invalid_argument("cannot export an empty field");
    if (!field.all_finite()) throw std::invalid_argument("cannot export a field with non-finite values");
    switch (format) {
    case ExportFormat::pgm: write_pgm(field, out, options.invert); break;
    case ExportFormat::asciigrid: write_asciigrid(field, out); break;
    case ExportFormat::csv: write_csv(field, out); break;
    }
}

void export_field(const HeadField& field, ExportFormat format, const std::filesystem::path& path,
                  const ExportOptions& options) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    export_field(field, format, out, options);
    out.flush();
    if (!out) throw Error("failed writing " + path.string());
}

HeadField read_field_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("i,j,lat,lon,value", 0) != 0) {
        throw Error("CSV field is missing its header");
    }
    std::vector<std::tuple<int, int, double>> cells;
    int rows = 0;
    int cols = 0;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        int i = 0;
        int j = 0;
        double lat = 0.0;
        double lon = 0.0;
        double value = 0.0;
        if (!(fields >> i >> j >> lat >> lon >> value) || i < 0 || j < 0) {
            throw Error("CSV field: malformed row at line " + std::to_string(line_no));
        }
        cells.emplace_back(i, j, value);
        rows = std::max(rows, i + 1);
        cols = std::max(cols, j + 1);
    }
    if (cells.empty()) throw Error("CSV field has no cells");
    if (cells.size() != static_cast<std::size_t>(rows) * cols) {
        throw Error("CSV field does not cover a full rectangle");
    }
    HeadField f(rows, cols);
    for (const auto& [i, j, v] : cells) f(i, j) = v;
    return f;
}

} // namespace gvflow

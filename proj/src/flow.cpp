/**
 * @file flow.cpp
 * @brief Residuals, Jacobi relaxation and snapshot sequencing
 */

#include "gvflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace gvflow {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

double neighbor_sum(const HeadField& h, int i, int j) {
    return h(i - 1, j) + h(i + 1, j) + h(i, j - 1) + h(i, j + 1);
}

double cell_residual(const HeadField& h1, const HeadField& h2, const FlowParams& p, int i,
                     int j) {
    const double center = h2(i, j);
    return (center - h1(i, j)) - p.alpha * (neighbor_sum(h2, i, j) - 4.0 * center) +
           p.source_at(i, j);
}

void require_shapes(const HeadField& a, const HeadField& b, const FlowParams& p) {
    if (!a.same_shape(b)) throw std::invalid_argument("head fields have different shapes");
    p.validate(a.rows(), a.cols());
}

} // namespace

double derive_alpha(double conductivity, double thickness, double storage, double dt,
                    double cell) {
    require_positive(conductivity, "conductivity K");
    require_positive(thickness, "thickness b");
    require_positive(storage, "storage S");
    require_positive(dt, "time step dt");
    require_positive(cell, "cell size");
    return conductivity * thickness / storage * dt / (cell * cell);
}

void FlowParams::validate(int rows, int cols) const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be non-negative and finite");
    }
    require_positive(dt, "time step dt");
    if (!source.empty() && (source.rows() != rows || source.cols() != cols)) {
        throw std::invalid_argument("source field shape does not match the grid");
    }
}

FlowParams FlowParams::from_hydrogeology(double conductivity, double thickness, double storage,
                                         double dt, double cell) {
    FlowParams p;
    p.alpha = derive_alpha(conductivity, thickness, storage, dt, cell);
    p.dt = dt;
    p.conductivity = conductivity;
    p.thickness = thickness;
    p.storage = storage;
    return p;
}

CellMask::CellMask(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("mask dimensions must be positive");
    mask_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

CellMask CellMask::boundary(int rows, int cols) {
    CellMask m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (i == 0 || j == 0 || i == rows - 1 || j == cols - 1) m.fix({i, j});
        }
    }
    return m;
}

std::size_t CellMask::free_count() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 0));
}

HeadField flow_residual(const HeadField& h_prev, const HeadField& h_curr, const FlowParams& p) {
    require_shapes(h_prev, h_curr, p);
    HeadField r(h_curr.rows(), h_curr.cols(), 0.0);
    for (int i = 1; i + 1 < h_curr.rows(); ++i) {
        for (int j = 1; j + 1 < h_curr.cols(); ++j) r(i, j) = cell_residual(h_prev, h_curr, p, i, j);
    }
    return r;
}

double f4_target(const HeadField& h_prev, const HeadField& h_curr, const FlowParams& p,
                 CellIndex cell) {
    require_shapes(h_prev, h_curr, p);
    if (!h_curr.contains(cell) || h_curr.is_boundary(cell.row, cell.col)) {
        throw std::invalid_argument("f4 is defined on interior cells only");
    }
    if (p.alpha == 0.0) throw std::invalid_argument("f4 is undefined for alpha = 0");
    const double center = h_curr[cell];
    return (center - h_prev[cell] + p.source_at(cell.row, cell.col)) / p.alpha + 4.0 * center;
}

double flow_residual_norm(const HeadField& h_prev, const HeadField& h_curr, const FlowParams& p,
                          const CellMask& fixed) {
    const double scale = 1.0 + 4.0 * p.alpha;
    double norm = 0.0;
    for (int i = 1; i + 1 < h_curr.rows(); ++i) {
        for (int j = 1; j + 1 < h_curr.cols(); ++j) {
            if (!fixed.fixed(i, j)) {
                norm = std::max(norm, std::abs(cell_residual(h_prev, h_curr, p, i, j)) / scale);
            }
        }
    }
    return norm;
}

FlowResult flow_iterate(const HeadField& h_prev, const HeadField& h_init, const FlowParams& p,
                        const CellMask& fixed, const FlowOptions& options) {
    require_shapes(h_prev, h_init, p);
    const int rows = h_init.rows();
    const int cols = h_init.cols();
    if (fixed.rows() != rows || fixed.cols() != cols) {
        throw std::invalid_argument("fixed mask shape does not match the grid");
    }
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (h_init.is_boundary(i, j) && !fixed.fixed(i, j)) {
                throw std::invalid_argument("fixed mask must cover the grid boundary");
            }
        }
    }
    if (!(options.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (options.max_iter < 1) throw std::invalid_argument("max_iter must be positive");
    if (options.max_step && !(*options.max_step > 0.0)) {
        throw std::invalid_argument("max_step must be positive");
    }

    FlowResult result;
    result.field = h_init;
    if (fixed.free_count() == 0) {
        result.converged = true;
        return result;
    }

    const double alpha = p.alpha;
    const double scale = 1.0 + 4.0 * alpha;
    auto limit = [&](double old_value, double target) {
        if (!options.max_step) return target;
        const double step = std::clamp(target - old_value, -*options.max_step, *options.max_step);
        return old_value + step;
    };

    if (alpha == 0.0) {
        // h2 - h1 = -G exactly; no coupling between cells.
        for (int i = 1; i + 1 < rows; ++i) {
            for (int j = 1; j + 1 < cols; ++j) {
                if (!fixed.fixed(i, j)) {
                    result.field(i, j) = limit(h_init(i, j), h_prev(i, j) - p.source_at(i, j));
                }
            }
        }
        result.iterations = 1;
        result.residual_norm = flow_residual_norm(h_prev, result.field, p, fixed);
        result.converged = result.residual_norm < options.tolerance;
        return result;
    }

    result.residual_norm = flow_residual_norm(h_prev, result.field, p, fixed);
    if (result.residual_norm < options.tolerance) {
        result.converged = true;
        return result;
    }

    HeadField next = result.field;
    for (int it = 1; it <= options.max_iter; ++it) {
        const HeadField& cur = result.field;
        detail::for_row_blocks(rows, options.workers, [&](int begin, int end) {
            for (int i = std::max(begin, 1); i < std::min(end, rows - 1); ++i) {
                for (int j = 1; j + 1 < cols; ++j) {
                    if (fixed.fixed(i, j)) continue;
                    const double quarter = 0.25 * neighbor_sum(cur, i, j);
                    const double target =
                        quarter + (h_prev(i, j) - p.source_at(i, j) - quarter) / scale;
                    next(i, j) = limit(cur(i, j), target);
                }
            }
        });
        std::swap(result.field, next);
        result.iterations = it;
        result.residual_norm = flow_residual_norm(h_prev, result.field, p, fixed);
        if (result.residual_norm < options.tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

std::vector<SequenceStep> simulate_sequence(std::span<const Snapshot> snapshots,
                                            const GridDomain& domain, const FlowParams& p,
                                            const Quantizer& q, const SequenceOptions& options) {
    if (snapshots.empty()) throw std::invalid_argument("no snapshots to simulate");
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        if (snapshots[k].points.empty()) {
            throw std::invalid_argument("snapshot at time " +
                                        std::to_string(snapshots[k].time_index) + " is empty");
        }
        if (k > 0 && snapshots[k].time_index <= snapshots[k - 1].time_index) {
            throw std::invalid_argument("snapshot time indices must be strictly increasing");
        }
    }
    p.validate(domain.rows(), domain.cols());

    FlowOptions flow_opts = options.flow;
    if (options.clamp_three_levels) flow_opts.max_step = 3.0 * q.ratio;

    std::vector<SequenceStep> steps;
    steps.reserve(snapshots.size());
    for (const auto& snap : snapshots) {
        SequenceStep step;
        step.time_index = snap.time_index;
        auto fit = smooth_fit(domain, snap.points, q, options.smooth);
        step.fit = fit.report;
        if (steps.empty()) {
            step.field = std::move(fit.field);
        } else {
            CellMask mask = CellMask::boundary(domain.rows(), domain.cols());
            for (const auto& pt : snap.points) mask.fix(*pt.cell);
            auto flow = flow_iterate(steps.back().field, fit.field, p, mask, flow_opts);
            step.field = flow.field;
            step.flow = std::move(flow);
        }
        steps.push_back(std::move(step));
    }
    return steps;
}

} // namespace gvflow

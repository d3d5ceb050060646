/**
 * @file flow.hpp
 * @brief Discretized groundwater diffusion on a grid
 *
 * One implicit time step of dh/dt = alpha * laplacian(h) - G with the
 * 5-point stencil:
 *
 *   h2 - h1 = alpha * (h2(x-1,y) + h2(x+1,y) + h2(x,y-1) + h2(x,y+1) - 4 h2(x,y)) - G
 *
 * where h1 is the head at the previous time and h2 at the current one.
 * alpha is dimensionless (it absorbs the time step and cell size) and
 * G is in head units per step. Positive G is a sink (pumping lowers the
 * head); negative G is recharge.
 */

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gvflow/domain.hpp"
#include "gvflow/field.hpp"
#include "gvflow/guiding_point.hpp"
#include "gvflow/gvf.hpp"
#include "gvflow/smoothing.hpp"

namespace gvflow {

/// Hydraulic diffusivity scaled to the grid: (K * b / S) * dt / cell^2.
/// Throws std::invalid_argument unless every input is positive and finite.
double derive_alpha(double conductivity, double thickness, double storage, double dt,
                    double cell);

struct FlowParams {
    /// Diffusion number. Zero selects the explicit limit h2 = h1 - G.
    double alpha = 1.0;
    /// Per-cell sink G; an empty field means G = 0 everywhere.
    HeadField source;
    double dt = 1.0;
    std::optional<double> conductivity;
    std::optional<double> thickness;
    std::optional<double> storage;

    double source_at(int row, int col) const { return source.empty() ? 0.0 : source(row, col); }

    /// Validates alpha/dt and that `source` (if any) has the given shape.
    void validate(int rows, int cols) const;

    static FlowParams from_hydrogeology(double conductivity, double thickness, double storage,
                                        double dt, double cell);
};

/// Cells whose head is held (Dirichlet) during flow iteration.
class CellMask {
public:
    CellMask(int rows, int cols);

    /// Mask with exactly the outer ring of cells fixed.
    static CellMask boundary(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool fixed(int row, int col) const { return mask_[index(row, col)] != 0; }
    void fix(CellIndex c) { mask_[index(c.row, c.col)] = 1; }
    std::size_t free_count() const;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * cols_ + col;
    }

    int rows_;
    int cols_;
    std::vector<char> mask_;
};

/**
 * @brief Per-cell residual of the discretized equation.
 *
 * r = (h2 - h1) - alpha * (sum of 4 neighbors of h2 - 4 h2) + G on interior
 * cells, 0 on the outer ring. Throws on shape mismatch.
 */
HeadField flow_residual(const HeadField& h_prev, const HeadField& h_curr, const FlowParams& p);

/**
 * @brief Neighbor sum the equation demands at an interior cell.
 *
 * f4 = (h2 - h1 + G) / alpha + 4 h2; the residual at the cell is zero
 * exactly when the four neighbors of h2 sum to f4. Throws
 * std::invalid_argument for boundary cells or alpha == 0.
 */
double f4_target(const HeadField& h_prev, const HeadField& h_curr, const FlowParams& p,
                 CellIndex cell);

struct FlowOptions {
    /// Stop once max |r| / (1 + 4 alpha) over free cells drops below this.
    double tolerance = 1e-8;
    int max_iter = 10000;
    /// Largest change any cell may make in one sweep (the three-level clamp).
    std::optional<double> max_step;
    int workers = 1;
};

struct FlowResult {
    HeadField field;
    int iterations = 0;
    double residual_norm = 0.0;
    bool converged = false;
};

/**
 * @brief Jacobi relaxation of the implicit step, starting from `h_init`.
 *
 * Every free cell takes the value that zeroes its own residual given its
 * neighbors from the previous iterate:
 *   h2 = (h1 - G + alpha * N) / (1 + 4 alpha),  N = neighbor sum.
 * Fixed cells are never written. The mask must fix the outer ring.
 * The reported norm is max |r| / (1 + 4 alpha), i.e. the residual
 * expressed as a head correction.
 */
FlowResult flow_iterate(const HeadField& h_prev, const HeadField& h_init, const FlowParams& p,
                        const CellMask& fixed, const FlowOptions& options);

/// Largest |r| / (1 + 4 alpha) over free interior cells.
double flow_residual_norm(const HeadField& h_prev, const HeadField& h_curr, const FlowParams& p,
                          const CellMask& fixed);

struct SequenceOptions {
    SmoothConfig smooth;
    FlowOptions flow;
    /// Clamp per-sweep changes to three quantization levels.
    bool clamp_three_levels = false;
};

struct SequenceStep {
    int time_index = 0;
    HeadField field;
    SmoothReport fit;
    /// Empty for the first snapshot, which is fitted without flow coupling.
    std::optional<FlowResult> flow;
};

/**
 * @brief Fits each snapshot and couples consecutive ones through the flow equation.
 *
 * The first snapshot is fitted alone. Each later snapshot is fitted, then
 * relaxed with flow_iterate against the previous result, holding the
 * outer ring and that snapshot's sample cells fixed. Time indices must be
 * strictly increasing and every snapshot nonempty.
 */
std::vector<SequenceStep> simulate_sequence(std::span<const Snapshot> snapshots,
                                            const GridDomain& domain, const FlowParams& p,
                                            const Quantizer& q, const SequenceOptions& options);

} // namespace gvflow

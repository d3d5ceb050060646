/**
 * @file smoothing.hpp
 * @brief Digital-discrete smoothing of a gradually varied fit
 *
 * Pipeline: quantize guiding points, build a gradually varied extension
 * (or fall back to Algorithm A when the samples are not feasible),
 * dequantize, then repeatedly re-estimate each cell with a Taylor
 * expansion about its nearest guiding point, blending by a damping ratio
 * below one half.
 */

#pragma once

#include <span>
#include <vector>

#include "gvflow/domain.hpp"
#include "gvflow/field.hpp"
#include "gvflow/guiding_point.hpp"
#include "gvflow/gvf.hpp"

namespace gvflow {

/// First partial derivatives in head units per cell; x runs along columns, y along rows.
struct PartialFields {
    HeadField fx;
    HeadField fy;
};

struct SmoothConfig {
    double damping = 0.4;
    int max_iterations = 500;
    double tolerance = 1e-6;
    /// Adds the quadratic Taylor terms, with second derivatives taken by
    /// differencing the first partials.
    bool second_order = false;
    /// Reserved; smooth_fit rejects it with UnsupportedError.
    bool multilevel = false;
    /// Sweeps used by Algorithm A when the samples are not feasible.
    int fallback_passes = 10;
    int workers = 1;

    /// Throws std::invalid_argument (or UnsupportedError for multilevel).
    void validate() const;
};

/// Central differences inside, one-sided on the outer rows/columns.
/// Throws std::invalid_argument for fields smaller than 2x2.
PartialFields fd_partials(const HeadField& field);

/**
 * @brief One damped Taylor update.
 *
 * Each cell is predicted from its nearest guiding point g (Euclidean
 * index distance, ties to the lowest sample index):
 *   p = value_g + dx * fx(g) + dy * fy(g)  [+ quadratic terms]
 * and moved to old + damping * (p - old). Reads only `field`, so rows may
 * be computed concurrently.
 */
HeadField taylor_correct(const HeadField& field, const PartialFields& partials,
                         std::span<const GuidingPoint> samples, const SmoothConfig& cfg);

struct SmoothReport {
    /// True when the gradually varied extension was used, false for the
    /// Algorithm A fallback.
    bool extended = false;
    int fallback_passes = 0;
    int iterations = 0;
    double final_change = 0.0;
    bool converged = false;
    std::vector<double> changes;
};

struct SmoothResult {
    HeadField field;
    SmoothReport report;
};

/**
 * @brief Full individual-surface fit on a grid.
 *
 * Guiding points must already be located on `domain`. The returned field
 * equals every guiding value exactly at its cell. Grids thinner than 2
 * cells in either direction skip the Taylor stage.
 */
SmoothResult smooth_fit(const GridDomain& domain, std::span<const GuidingPoint> samples,
                        const Quantizer& q, const SmoothConfig& cfg);

} // namespace gvflow

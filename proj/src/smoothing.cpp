/**
 * @file smoothing.cpp
 * @brief Finite-difference partials, Taylor correction and the fit pipeline
 */

#include "gvflow/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <stdexcept>

#include "gvflow/error.hpp"
#include "parallel.hpp"

namespace gvflow {

namespace {

void require_located(std::span<const GuidingPoint> samples, int rows, int cols) {
    if (samples.empty()) throw std::invalid_argument("at least one guiding point is required");
    for (const auto& s : samples) {
        if (!s.cell || s.cell->row < 0 || s.cell->row >= rows || s.cell->col < 0 ||
            s.cell->col >= cols) {
            throw std::invalid_argument("guiding point is not located inside the grid");
        }
    }
}

/// Index of the nearest guiding point per cell.
std::vector<int> nearest_samples(int rows, int cols, std::span<const GuidingPoint> samples) {
    std::vector<int> nearest(static_cast<std::size_t>(rows) * cols, 0);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            int best = 0;
            long best_d2 = -1;
            for (std::size_t k = 0; k < samples.size(); ++k) {
                const long di = samples[k].cell->row - i;
                const long dj = samples[k].cell->col - j;
                const long d2 = di * di + dj * dj;
                if (best_d2 < 0 || d2 < best_d2) {
                    best_d2 = d2;
                    best = static_cast<int>(k);
                }
            }
            nearest[static_cast<std::size_t>(i) * cols + j] = best;
        }
    }
    return nearest;
}

double d_dx(const HeadField& h, int i, int j) {
    const int last = h.cols() - 1;
    if (j == 0) return h(i, 1) - h(i, 0);
    if (j == last) return h(i, last) - h(i, last - 1);
    return 0.5 * (h(i, j + 1) - h(i, j - 1));
}

double d_dy(const HeadField& h, int i, int j) {
    const int last = h.rows() - 1;
    if (i == 0) return h(1, j) - h(0, j);
    if (i == last) return h(last, j) - h(last - 1, j);
    return 0.5 * (h(i + 1, j) - h(i - 1, j));
}

struct SecondPartials {
    HeadField fxx;
    HeadField fxy;
    HeadField fyy;
};

SecondPartials second_partials(const PartialFields& p) {
    const auto dfx = fd_partials(p.fx);
    const auto dfy = fd_partials(p.fy);
    SecondPartials s{dfx.fx, HeadField(p.fx.rows(), p.fx.cols()), dfy.fy};
    for (std::size_t k = 0; k < s.fxy.size(); ++k) {
        s.fxy.values()[k] = 0.5 * (dfx.fy.values()[k] + dfy.fx.values()[k]);
    }
    return s;
}

HeadField taylor_step(const HeadField& field, const PartialFields& partials,
                      std::span<const GuidingPoint> samples, const std::vector<int>& nearest,
                      const SmoothConfig& cfg) {
    std::optional<SecondPartials> second;
    if (cfg.second_order) second = second_partials(partials);

    HeadField out = field;
    const int cols = field.cols();
    detail::for_row_blocks(field.rows(), cfg.workers, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            for (int j = 0; j < cols; ++j) {
                const auto& g = samples[nearest[static_cast<std::size_t>(i) * cols + j]];
                const auto [gi, gj] = *g.cell;
                const double dx = j - gj;
                const double dy = i - gi;
                double prediction = g.value + dx * partials.fx(gi, gj) + dy * partials.fy(gi, gj);
                if (second) {
                    prediction += 0.5 * dx * dx * second->fxx(gi, gj) +
                                  dx * dy * second->fxy(gi, gj) +
                                  0.5 * dy * dy * second->fyy(gi, gj);
                }
                const double old = field(i, j);
                out(i, j) = old + cfg.damping * (prediction - old);
            }
        }
    });
    return out;
}

void impose(HeadField& field, std::span<const GuidingPoint> samples) {
    for (const auto& s : samples) field[*s.cell] = s.value;
}

} // namespace

void SmoothConfig::validate() const {
    if (multilevel) throw UnsupportedError("multilevel fitting is unsupported");
    if (!(damping > 0.0 && damping < 0.5)) {
        throw std::invalid_argument("damping must lie in (0, 0.5)");
    }
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (fallback_passes < 1) throw std::invalid_argument("fallback_passes must be positive");
}

PartialFields fd_partials(const HeadField& field) {
    if (field.rows() < 2 || field.cols() < 2) {
        throw std::invalid_argument("finite differences need a field of at least 2x2");
    }
    PartialFields p{HeadField(field.rows(), field.cols()), HeadField(field.rows(), field.cols())};
    for (int i = 0; i < field.rows(); ++i) {
        for (int j = 0; j < field.cols(); ++j) {
            p.fx(i, j) = d_dx(field, i, j);
            p.fy(i, j) = d_dy(field, i, j);
        }
    }
    return p;
}

HeadField taylor_correct(const HeadField& field, const PartialFields& partials,
                         std::span<const GuidingPoint> samples, const SmoothConfig& cfg) {
    cfg.validate();
    require_located(samples, field.rows(), field.cols());
    if (!partials.fx.same_shape(field) || !partials.fy.same_shape(field)) {
        throw std::invalid_argument("partials do not match the field shape");
    }
    const auto nearest = nearest_samples(field.rows(), field.cols(), samples);
    HeadField out = taylor_step(field, partials, samples, nearest, cfg);
    out.set_georef(field.georef());
    return out;
}

SmoothResult smooth_fit(const GridDomain& domain, std::span<const GuidingPoint> samples,
                        const Quantizer& q, const SmoothConfig& cfg) {
    cfg.validate();
    const int rows = domain.rows();
    const int cols = domain.cols();
    require_located(samples, rows, cols);

    std::map<CellIndex, double> by_cell;
    for (const auto& s : samples) {
        const auto [it, inserted] = by_cell.emplace(*s.cell, s.value);
        if (!inserted && it->second != s.value) {
            throw ConflictError("two guiding points share cell (" + std::to_string(s.cell->row) +
                                ", " + std::to_string(s.cell->col) + ") with different values");
        }
    }

    SmoothResult result;
    std::vector<LevelSample> levels;
    levels.reserve(samples.size());
    for (const auto& s : samples) levels.push_back({domain.vertex(*s.cell), q.level(s.value)});

    HeadField field(rows, cols);
    if (feasibility_check(domain, levels)) {
        const auto extension = gvf_extend(domain, levels);
        const auto values = dequantize(extension.levels, q);
        std::copy(values.begin(), values.end(), field.values().begin());
        result.report.extended = true;
    } else {
        double mean = 0.0;
        for (const auto& s : samples) mean += s.value;
        mean /= static_cast<double>(samples.size());
        AlgorithmAOptions opts;
        opts.ratio = q.ratio;
        opts.passes = cfg.fallback_passes;
        opts.workers = cfg.workers;
        auto fallback = algorithm_a_fit(HeadField(rows, cols, mean), samples, opts);
        field = std::move(fallback.field);
        result.report.fallback_passes = fallback.passes;
    }
    impose(field, samples);

    if (rows >= 2 && cols >= 2) {
        const auto nearest = nearest_samples(rows, cols, samples);
        for (int it = 1; it <= cfg.max_iterations; ++it) {
            const auto partials = fd_partials(field);
            HeadField next = taylor_step(field, partials, samples, nearest, cfg);
            impose(next, samples);
            const double change = max_abs_difference(next, field);
            field = std::move(next);
            result.report.iterations = it;
            result.report.final_change = change;
            result.report.changes.push_back(change);
            if (change < cfg.tolerance) {
                result.report.converged = true;
                break;
            }
        }
    } else {
        result.report.converged = true;
    }
    result.field = std::move(field);
    return result;
}

} // namespace gvflow

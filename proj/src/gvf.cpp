/**
 * @file gvf.cpp
 * @brief Quantization, feasibility, extension and Algorithm A
 */

#include "gvflow/gvf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace gvflow {

namespace {

int floor_half(long long sum) {
    // arithmetic shift floors for negative values as well
    return static_cast<int>(sum >> 1);
}

void require_samples(const DomainGraph& domain, std::span<const LevelSample> samples) {
    for (const auto& s : samples) {
        if (!domain.contains(s.vertex)) {
            throw std::invalid_argument("sample vertex " + std::to_string(s.vertex) +
                                        " is not in the domain");
        }
        if (s.level < 1) {
            throw std::invalid_argument("sample level " + std::to_string(s.level) +
                                        " is below 1");
        }
    }
}

/// Drops repeated (vertex, level) entries; throws on repeated vertex with another level.
std::vector<LevelSample> unique_samples(const DomainGraph& domain,
                                        std::span<const LevelSample> samples) {
    std::vector<int> seen(static_cast<std::size_t>(domain.vertex_count()), 0);
    std::vector<LevelSample> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        int& level = seen[s.vertex];
        if (level == 0) {
            level = s.level;
            out.push_back(s);
        } else if (level != s.level) {
            throw ConflictError("vertex " + std::to_string(s.vertex) +
                                " has conflicting sample levels " + std::to_string(level) +
                                " and " + std::to_string(s.level));
        }
    }
    return out;
}

} // namespace

Quantizer::Quantizer(double ratio_, double origin_) : ratio(ratio_), origin(origin_) {
    if (!(ratio_ > 0.0) || !std::isfinite(ratio_)) {
        throw std::invalid_argument("quantizer ratio must be positive and finite");
    }
    if (!std::isfinite(origin_)) {
        throw std::invalid_argument("quantizer origin must be finite");
    }
}

int Quantizer::level(double value) const {
    return static_cast<int>(std::floor((value - origin) / ratio)) + 1;
}

Quantizer Quantizer::for_values(std::span<const double> values, double ratio) {
    if (values.empty()) throw std::invalid_argument("cannot fit a quantizer to no values");
    const double lo = *std::min_element(values.begin(), values.end());
    return Quantizer(ratio, lo - 0.5 * ratio);
}

Quantizer Quantizer::with_levels(std::span<const double> values, int levels) {
    if (values.empty()) throw std::invalid_argument("cannot fit a quantizer to no values");
    if (levels < 1) throw std::invalid_argument("level count must be positive");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double span = *hi - *lo;
    return for_values(values, span > 0.0 ? span / levels : 1.0);
}

std::vector<int> quantize(std::span<const double> values, const Quantizer& q) {
    std::vector<int> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(q.level(v));
    return out;
}

std::vector<double> dequantize(std::span<const int> levels, const Quantizer& q) {
    std::vector<double> out;
    out.reserve(levels.size());
    for (int l : levels) out.push_back(q.center(l));
    return out;
}

InfeasibleError::InfeasibleError(const SamplePair& pair)
    : Error("samples at vertices " + std::to_string(pair.first.vertex) + " (level " +
            std::to_string(pair.first.level) + ") and " + std::to_string(pair.second.vertex) +
            " (level " + std::to_string(pair.second.level) + ") are " +
            std::to_string(pair.distance) + " apart but differ by " +
            std::to_string(std::abs(pair.first.level - pair.second.level)) + " levels"),
      pair_(pair) {}

Feasibility feasibility_check(const DomainGraph& domain, std::span<const LevelSample> samples) {
    require_samples(domain, samples);
    const auto unique = unique_samples(domain, samples);
    for (std::size_t i = 0; i < unique.size(); ++i) {
        const auto dist = distances_from(domain, unique[i].vertex);
        for (std::size_t j = i + 1; j < unique.size(); ++j) {
            const int d = dist[unique[j].vertex];
            if (std::abs(unique[i].level - unique[j].level) > d) {
                return {false, SamplePair{unique[i], unique[j], d}};
            }
        }
    }
    return {};
}

LevelField gvf_extend(const DomainGraph& domain, std::span<const LevelSample> samples) {
    if (samples.empty()) throw std::invalid_argument("extension needs at least one sample");
    const auto check = feasibility_check(domain, samples);
    if (!check) throw InfeasibleError(*check.violation);

    const auto unique = unique_samples(domain, samples);
    const auto nv = static_cast<std::size_t>(domain.vertex_count());
    std::vector<int> lower(nv, std::numeric_limits<int>::min());
    std::vector<int> upper(nv, std::numeric_limits<int>::max());
    for (const auto& s : unique) {
        const auto dist = distances_from(domain, s.vertex);
        for (std::size_t v = 0; v < nv; ++v) {
            lower[v] = std::max(lower[v], s.level - dist[v]);
            upper[v] = std::min(upper[v], s.level + dist[v]);
        }
    }

    LevelField out;
    out.levels.assign(nv, 0);
    std::vector<char> assigned(nv, 0);
    std::vector<VertexId> queue;
    queue.reserve(nv);
    for (const auto& s : unique) {
        out.levels[s.vertex] = s.level;
        assigned[s.vertex] = 1;
        queue.push_back(s.vertex);
    }
    std::vector<char> queued(assigned);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const VertexId v = queue[head];
        if (!assigned[v]) {
            // Both bounds are 1-Lipschitz in v, so the floored midpoint is too:
            // it always lands inside every assigned neighbor's [level-1, level+1].
            const int level = floor_half(static_cast<long long>(lower[v]) + upper[v]);
            for (VertexId w : domain.neighbors(v)) {
                if (assigned[w] && std::abs(out.levels[w] - level) > 1) {
                    throw std::logic_error("extension broke gradual variation at vertex " +
                                           std::to_string(v));
                }
            }
            out.levels[v] = level;
            assigned[v] = 1;
        }
        for (VertexId w : domain.neighbors(v)) {
            if (!queued[w]) {
                queued[w] = 1;
                queue.push_back(w);
            }
        }
    }
    out.n = *std::max_element(out.levels.begin(), out.levels.end());
    return out;
}

GvfCheck verify_gvf(const DomainGraph& domain, const LevelField& field) {
    if (field.levels.size() != static_cast<std::size_t>(domain.vertex_count())) {
        throw std::invalid_argument("level field size does not match the domain");
    }
    for (VertexId a = 0; a < domain.vertex_count(); ++a) {
        for (VertexId b : domain.neighbors(a)) {
            if (a < b && std::abs(field.levels[a] - field.levels[b]) > 1) {
                return {false, Edge{a, b}};
            }
        }
    }
    return {};
}

AlgorithmAResult algorithm_a_fit(HeadField field, std::span<const GuidingPoint> samples,
                                 const AlgorithmAOptions& options) {
    if (samples.empty()) throw std::invalid_argument("Algorithm A needs at least one sample");
    if (!(options.ratio > 0.0)) throw std::invalid_argument("ratio must be positive");
    if (options.passes < 1) throw std::invalid_argument("pass count must be positive");
    for (const auto& s : samples) {
        if (!s.cell || !field.contains(*s.cell)) {
            throw std::invalid_argument("Algorithm A sample is not located inside the grid");
        }
    }

    const double ratio = options.ratio;
    const int rows = field.rows();
    const int cols = field.cols();
    std::vector<double> row_change(static_cast<std::size_t>(rows), 0.0);

    AlgorithmAResult result;
    for (int pass = 1; pass <= options.passes; ++pass) {
        // Each cell only reads its own value, so row blocks are independent.
        detail::for_row_blocks(rows, options.workers, [&](int begin, int end) {
            for (int i = begin; i < end; ++i) {
                double row_max = 0.0;
                for (int j = 0; j < cols; ++j) {
                    double& cell = field(i, j);
                    for (const auto& s : samples) {
                        const double di = s.cell->row - i;
                        const double dj = s.cell->col - j;
                        const double distance = std::sqrt(di * di + dj * dj);
                        const double excess = std::abs(cell - s.value) / ratio - distance;
                        if (excess > 0.0) {
                            const double step = excess * ratio;
                            cell += cell > s.value ? -step : step;
                            row_max = std::max(row_max, step);
                        }
                    }
                }
                row_change[i] = row_max;
            }
        });
        result.passes = pass;
        result.last_change = *std::max_element(row_change.begin(), row_change.end());
        if (result.last_change < options.stop_change) {
            result.converged = true;
            break;
        }
    }
    result.field = std::move(field);
    return result;
}

} // namespace gvflow

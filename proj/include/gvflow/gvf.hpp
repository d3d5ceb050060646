/**
 * @file gvf.hpp
 * @brief Gradually varied functions on graph domains
 *
 * A level function F: D -> {1..n} is gradually varied when adjacent
 * vertices differ by at most one level. Given samples f on J, a
 * gradually varied extension exists iff d(x,y) >= |f(x) - f(y)| for every
 * sample pair, d being the graph distance.
 *
 * Also hosts Algorithm A, the correction sweep used when real-valued
 * data does not satisfy that condition.
 */

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gvflow/domain.hpp"
#include "gvflow/error.hpp"
#include "gvflow/field.hpp"
#include "gvflow/guiding_point.hpp"

namespace gvflow {

struct LevelSample {
    VertexId vertex = 0;
    int level = 1;

    bool operator==(const LevelSample&) const = default;
};

/// Integer level per vertex of some domain, values in {1..n}.
struct LevelField {
    std::vector<int> levels;
    int n = 0;
};

/**
 * @brief Maps real values onto integer levels of width `ratio`.
 *
 * level(v) = floor((v - origin) / ratio) + 1, and a level dequantizes to
 * its center origin + (level - 0.5) * ratio, so the round trip is within
 * ratio / 2.
 */
struct Quantizer {
    double ratio = 1.0;
    double origin = 0.0;

    Quantizer() = default;
    Quantizer(double ratio_, double origin_);

    int level(double value) const;
    double center(int level) const { return origin + (level - 0.5) * ratio; }

    /// Origin placed half a level below the minimum, so the minimum value
    /// sits exactly on the center of level 1.
    static Quantizer for_values(std::span<const double> values, double ratio);

    /// ratio = (max - min) / levels, falling back to 1 for constant data.
    static Quantizer with_levels(std::span<const double> values, int levels);
};

std::vector<int> quantize(std::span<const double> values, const Quantizer& q);
std::vector<double> dequantize(std::span<const int> levels, const Quantizer& q);

struct SamplePair {
    LevelSample first;
    LevelSample second;
    int distance = 0;
};

struct Feasibility {
    bool feasible = true;
    std::optional<SamplePair> violation;

    explicit operator bool() const { return feasible; }
};

/// Thrown by gvf_extend for samples that violate the distance condition.
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const SamplePair& pair);
    const SamplePair& pair() const { return pair_; }

private:
    SamplePair pair_;
};

/**
 * @brief Checks d(x,y) >= |f(x) - f(y)| over all sample pairs.
 *
 * Samples repeating a vertex with the same level are accepted; repeated
 * vertices with different levels raise ConflictError. Reports the first
 * violating pair in sample order.
 */
Feasibility feasibility_check(const DomainGraph& domain, std::span<const LevelSample> samples);

/**
 * @brief Constructs a gradually varied extension that agrees with the samples.
 *
 * Unknown vertices are filled in breadth-first order from the sample set.
 * Each one takes the midpoint (rounded down) of its feasible interval
 * [max_s f(s) - d(x,s), min_s f(s) + d(x,s)]. That choice always lies within
 * one level of every neighbor already assigned, so the fill never stalls.
 *
 * Throws InfeasibleError when feasibility_check fails and
 * std::invalid_argument on empty input or levels < 1.
 */
LevelField gvf_extend(const DomainGraph& domain, std::span<const LevelSample> samples);

struct GvfCheck {
    bool ok = true;
    std::optional<Edge> violation;

    explicit operator bool() const { return ok; }
};

/// True iff |F(a) - F(b)| <= 1 on every edge; reports the first bad edge.
GvfCheck verify_gvf(const DomainGraph& domain, const LevelField& field);

struct AlgorithmAOptions {
    double ratio = 1.0;
    int passes = 10;
    /// Sweeping stops early once the largest single correction in a pass
    /// drops below this.
    double stop_change = 1e-9;
    int workers = 1;
};

struct AlgorithmAResult {
    HeadField field;
    int passes = 0;
    /// Largest single correction applied during the last pass.
    double last_change = 0.0;
    bool converged = false;
};

/**
 * @brief Sample-contribution correction sweep ("Algorithm A").
 *
 * For every cell (row-major) and every located sample k in order, with
 * dist the Euclidean index distance, excess = |cell - value_k| / ratio - dist.
 * A positive excess moves the cell toward value_k by excess * ratio.
 * Samples must carry a grid cell inside the field.
 */
AlgorithmAResult algorithm_a_fit(HeadField field, std::span<const GuidingPoint> samples,
                                 const AlgorithmAOptions& options);

} // namespace gvflow

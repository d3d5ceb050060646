#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gvflow/gvf.hpp"
#include "oracle.hpp"

using namespace gvflow;

namespace {

std::vector<LevelSample> random_feasible(const GridDomain& g, std::mt19937& rng, int max_samples) {
    // Levels drawn from a random 1-Lipschitz function are always feasible.
    const int nv = g.vertex_count();
    const int base = 1 + static_cast<int>(rng() % 6);
    std::vector<int> f(nv);
    const int gx = static_cast<int>(rng() % 3) - 1;
    const int gy = static_cast<int>(rng() % 3) - 1;
    for (int v = 0; v < nv; ++v) {
        const auto c = g.cell(v);
        f[v] = base + 20 + gx * c.col + gy * c.row + static_cast<int>(rng() % 2);
    }
    std::vector<LevelSample> s;
    std::vector<char> used(nv, 0);
    const int k = 1 + static_cast<int>(rng() % max_samples);
    for (int i = 0; i < k; ++i) {
        const int v = static_cast<int>(rng() % nv);
        if (used[v]) continue;
        used[v] = 1;
        s.push_back({v, f[v]});
    }
    // Thin any pair that the +-1 jitter made infeasible.
    std::vector<LevelSample> ok;
    for (const auto& x : s) {
        bool fits = true;
        for (const auto& y : ok) {
            const auto a = g.cell(x.vertex);
            const auto b = g.cell(y.vertex);
            if (std::abs(x.level - y.level) > std::abs(a.row - b.row) + std::abs(a.col - b.col)) fits = false;
        }
        if (fits) ok.push_back(x);
    }
    return ok;
}

} // namespace

TEST_CASE("quantize examples") {
    const Quantizer q(1.0, 0.0);
    const double values[] = {0.2, 1.7, 2.0};
    CHECK(quantize(values, q) == std::vector<int>{1, 2, 3});
    CHECK(Quantizer(0.37, 5.5).level(5.5) == 1);
    CHECK(Quantizer(12.0, -3.0).level(-3.0) == 1);
    CHECK_THROWS_AS(Quantizer(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("dequantize(quantize(v)) stays within half a level") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> value(-50.0, 250.0);
    std::uniform_real_distribution<double> ratio(0.01, 20.0);
    for (int t = 0; t < 2000; ++t) {
        const Quantizer q(ratio(rng), value(rng));
        const double v = value(rng);
        const int l = q.level(v);
        CHECK(std::abs(q.center(l) - v) <= q.ratio / 2 * (1 + 1e-12));
    }
}

TEST_CASE("with_levels puts the minimum on a level center") {
    const double values[] = {4.0, 10.0, 7.0};
    const auto q = Quantizer::with_levels(values, 3);
    CHECK(q.ratio == doctest::Approx(2.0));
    CHECK(q.level(4.0) == 1);
    CHECK(q.center(1) == doctest::Approx(4.0));
    CHECK(q.level(10.0) == 4);
    const double flat[] = {3.0, 3.0};
    CHECK(Quantizer::with_levels(flat, 8).ratio == 1.0);
}

TEST_CASE("feasibility_check on hand cases") {
    const auto path3 = build_grid(1, 3);
    const LevelSample adjacent[] = {{0, 5}, {1, 7}};
    const auto bad = feasibility_check(path3, adjacent);
    CHECK_FALSE(bad.feasible);
    REQUIRE(bad.violation);
    CHECK(bad.violation->first.vertex == 0);
    CHECK(bad.violation->second.vertex == 1);
    CHECK(bad.violation->distance == 1);

    const LevelSample ends[] = {{0, 1}, {2, 3}};
    CHECK(feasibility_check(path3, ends).feasible);

    const LevelSample conflict[] = {{1, 2}, {1, 3}};
    CHECK_THROWS_AS(feasibility_check(path3, conflict), ConflictError);
    const LevelSample repeat[] = {{1, 2}, {1, 2}};
    CHECK(feasibility_check(path3, repeat).feasible);

    const LevelSample outside[] = {{3, 1}};
    CHECK_THROWS_AS(feasibility_check(path3, outside), std::invalid_argument);
}

TEST_CASE("feasibility_check is permutation invariant") {
    std::mt19937 rng(11);
    const auto g = build_grid(4, 5);
    for (int t = 0; t < 500; ++t) {
        std::vector<LevelSample> s;
        std::vector<char> used(20, 0);
        for (int k = 0; k < 5; ++k) {
            const int v = static_cast<int>(rng() % 20);
            if (used[v]) continue;
            used[v] = 1;
            s.push_back({v, 1 + static_cast<int>(rng() % 6)});
        }
        const bool base = feasibility_check(g, s).feasible;
        std::shuffle(s.begin(), s.end(), rng);
        CHECK(feasibility_check(g, s).feasible == base);
    }
}

TEST_CASE("feasibility_check agrees with exhaustive search on 2x3") {
    const auto g = build_grid(2, 3);
    const auto adj = oracle::grid_adjacency(2, 3);
    int mismatches = 0;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            for (int la = 1; la <= 4; ++la)
                for (int lb = 1; lb <= 4; ++lb) {
                    const LevelSample s[] = {{a, la}, {b, lb}};
                    const bool fast = feasibility_check(g, s).feasible;
                    const bool brute = oracle::enumerate_gvf_interpolants(adj, {{a, la}, {b, lb}}, 4).has_value();
                    mismatches += fast != brute;
                }
    CHECK(mismatches == 0);
}

TEST_CASE("gvf_extend hand cases") {
    const auto g = build_grid(4, 4);
    const LevelSample one[] = {{5, 5}};
    const auto flat = gvf_extend(g, one);
    CHECK(std::all_of(flat.levels.begin(), flat.levels.end(), [](int l) { return l == 5; }));
    CHECK(flat.n == 5);

    const auto path3 = build_grid(1, 3);
    const LevelSample ends[] = {{0, 1}, {2, 3}};
    CHECK(gvf_extend(path3, ends).levels == std::vector<int>{1, 2, 3});

    const LevelSample bad[] = {{0, 1}, {1, 3}};
    try {
        gvf_extend(path3, bad);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(e.pair().first.vertex == 0);
        CHECK(e.pair().second.vertex == 1);
    }
    CHECK_THROWS_AS(gvf_extend(path3, std::span<const LevelSample>{}), std::invalid_argument);
}

TEST_CASE("gvf_extend output is gradually varied, interpolating and deterministic") {
    std::mt19937 rng(31337);
    for (int t = 0; t < 1000; ++t) {
        const int rows = 1 + static_cast<int>(rng() % 8);
        const int cols = 1 + static_cast<int>(rng() % 8);
        const auto g = build_grid(rows, cols);
        const auto samples = random_feasible(g, rng, 8);
        REQUIRE(feasibility_check(g, samples).feasible);
        const auto f = gvf_extend(g, samples);
        CHECK(verify_gvf(g, f).ok);
        for (const auto& s : samples) CHECK(f.levels[s.vertex] == s.level);
        CHECK(gvf_extend(g, samples).levels == f.levels);
    }
}

TEST_CASE("shifting sample levels shifts the extension") {
    std::mt19937 rng(5);
    for (int t = 0; t < 300; ++t) {
        const auto g = build_grid(1 + static_cast<int>(rng() % 7), 1 + static_cast<int>(rng() % 7));
        auto samples = random_feasible(g, rng, 6);
        const auto base = gvf_extend(g, samples);
        const int k = 1 + static_cast<int>(rng() % 9);
        for (auto& s : samples) s.level += k;
        const auto shifted = gvf_extend(g, samples);
        for (std::size_t v = 0; v < base.levels.size(); ++v) CHECK(shifted.levels[v] == base.levels[v] + k);
    }
}

TEST_CASE("gvf_extend works on general graphs") {
    // a 6-cycle with a chord
    const Edge edges[] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {1, 4}};
    const auto g = DomainGraph::from_edges(6, edges);
    const LevelSample s[] = {{0, 1}, {3, 3}};
    const auto f = gvf_extend(g, s);
    CHECK(verify_gvf(g, f).ok);
    CHECK(f.levels[0] == 1);
    CHECK(f.levels[3] == 3);
}

TEST_CASE("verify_gvf") {
    const auto g = build_grid(2, 2);
    CHECK(verify_gvf(g, LevelField{{3, 3, 3, 3}, 3}).ok);
    const auto bad = verify_gvf(g, LevelField{{1, 3, 1, 2}, 3});
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.violation);
    CHECK(*bad.violation == Edge{0, 1});
    CHECK_THROWS_AS(verify_gvf(g, LevelField{{1, 1}, 1}), std::invalid_argument);
}

TEST_CASE("Algorithm A hand trace on a 3x3 grid") {
    const GuidingPoint s[] = {GuidingPoint::at_cell(1, 1, 10.0)};
    AlgorithmAOptions opts;
    opts.ratio = 1.0;
    opts.passes = 1;
    const auto r = algorithm_a_fit(HeadField(3, 3, 0.0), s, opts);
    CHECK(r.field(1, 1) == 10.0);
    CHECK(r.field(0, 1) == 9.0);  // excess 10 - 1 = 9
    CHECK(r.field(1, 2) == 9.0);
    CHECK(r.field(0, 0) == doctest::Approx(10.0 - std::sqrt(2.0)));
}

TEST_CASE("Algorithm A leaves satisfied cells alone") {
    const GuidingPoint s[] = {GuidingPoint::at_cell(0, 0, 4.0), GuidingPoint::at_cell(2, 3, 4.0)};
    AlgorithmAOptions opts;
    opts.ratio = 0.5;
    const auto r = algorithm_a_fit(HeadField(3, 4, 4.0), s, opts);
    for (double v : r.field.values()) CHECK(v == 4.0);
    CHECK(r.converged);
    CHECK(r.passes == 1);

    CHECK_THROWS_AS(algorithm_a_fit(HeadField(3, 4), std::span<const GuidingPoint>{}, opts),
                    std::invalid_argument);
}

TEST_CASE("Algorithm A converged fields satisfy the distance condition") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> value(0.0, 30.0);
    int converged_runs = 0;
    for (int t = 0; t < 200; ++t) {
        const int rows = 3 + static_cast<int>(rng() % 8);
        const int cols = 3 + static_cast<int>(rng() % 8);
        std::vector<GuidingPoint> s;
        for (int k = 0; k < 4; ++k)
            s.push_back(GuidingPoint::at_cell(static_cast<int>(rng() % rows), static_cast<int>(rng() % cols), value(rng)));
        AlgorithmAOptions opts;
        opts.ratio = 5.0 + value(rng);
        opts.passes = 200;
        const auto r = algorithm_a_fit(HeadField(rows, cols, value(rng)), s, opts);
        if (!r.converged) continue;
        ++converged_runs;
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                for (const auto& g : s) {
                    const double d = std::hypot(g.cell->row - i, g.cell->col - j);
                    CHECK(std::abs(r.field(i, j) - g.value) / opts.ratio <= d + 1e-6);
                }
    }
    CHECK(converged_runs > 0);
}

TEST_CASE("Algorithm A is independent of the worker count") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> value(0.0, 10.0);
    std::vector<GuidingPoint> s;
    for (int k = 0; k < 9; ++k)
        s.push_back(GuidingPoint::at_cell(static_cast<int>(rng() % 20), static_cast<int>(rng() % 17), value(rng)));
    AlgorithmAOptions one;
    one.ratio = 0.7;
    AlgorithmAOptions many = one;
    many.workers = 5;
    const auto a = algorithm_a_fit(HeadField(20, 17, 5.0), s, one);
    const auto b = algorithm_a_fit(HeadField(20, 17, 5.0), s, many);
    CHECK(a.field == b.field);
    CHECK(a.passes == b.passes);
}

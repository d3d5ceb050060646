#include <doctest.h>

#include <cmath>
#include <random>

#include "gvflow/error.hpp"
#include "gvflow/smoothing.hpp"

using namespace gvflow;

namespace {

HeadField from_function(int rows, int cols, auto&& fn) {
    HeadField f(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) f(i, j) = fn(i, j);
    return f;
}

std::vector<GuidingPoint> plane_samples(int rows, int cols, int spacing, auto&& plane) {
    std::vector<GuidingPoint> s;
    for (int i = 0; i < rows; i += spacing)
        for (int j = 0; j < cols; j += spacing) s.push_back(GuidingPoint::at_cell(i, j, plane(i, j)));
    return s;
}

/// Max interior |fx/h - d/dx u| on a uniform grid over [0, 1].
double interior_fx_error(int n, auto&& u, auto&& du) {
    const double h = 1.0 / (n - 1);
    const auto f = from_function(3, n, [&](int, int j) { return u(j * h); });
    const auto p = fd_partials(f);
    double err = 0.0;
    for (int j = 1; j + 1 < n; ++j) err = std::max(err, std::abs(p.fx(1, j) / h - du(j * h)));
    return err;
}

} // namespace

TEST_CASE("fd_partials of constant and linear fields") {
    const auto c = fd_partials(HeadField(4, 5, 3.25));
    for (double v : c.fx.values()) CHECK(v == 0.0);
    for (double v : c.fy.values()) CHECK(v == 0.0);

    const auto lin = fd_partials(from_function(5, 6, [](int i, int j) { return 2.0 + j - 0.5 * i; }));
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 6; ++j) {
            CHECK(lin.fx(i, j) == doctest::Approx(1.0).epsilon(1e-15));
            CHECK(lin.fy(i, j) == doctest::Approx(-0.5).epsilon(1e-15));
        }
}

TEST_CASE("fd_partials needs at least 2x2") {
    CHECK_THROWS_AS(fd_partials(HeadField(1, 5)), std::invalid_argument);
    CHECK_THROWS_AS(fd_partials(HeadField(5, 1)), std::invalid_argument);
    CHECK_NOTHROW(fd_partials(HeadField(2, 2)));
}

TEST_CASE("central differences are exact for quadratics") {
    for (int n : {9, 17, 33, 65}) {
        const double err = interior_fx_error(n, [](double x) { return x * x; }, [](double x) { return 2 * x; });
        CHECK(err < 1e-12);
    }
}

TEST_CASE("interior differences converge at second order on a cubic") {
    auto u = [](double x) { return x * x * x; };
    auto du = [](double x) { return 3 * x * x; };
    const double e1 = interior_fx_error(17, u, du);
    const double e2 = interior_fx_error(33, u, du);
    const double e3 = interior_fx_error(65, u, du);
    const double slope = std::log(e1 / e3) / std::log((1.0 / 16) / (1.0 / 64));
    CHECK(e2 < e1);
    CHECK(e3 < e2);
    CHECK(std::abs(slope - 2.0) < 0.2);
}

TEST_CASE("taylor_correct fixed point and zero-damping limit") {
    const auto plane = [](int i, int j) { return 10.0 + 0.5 * j - 0.25 * i; };
    const auto field = from_function(7, 7, plane);
    const GuidingPoint s[] = {GuidingPoint::at_cell(3, 3, plane(3, 3))};
    const auto p = fd_partials(field);
    SmoothConfig cfg;
    CHECK(taylor_correct(field, p, s, cfg) == field);

    std::mt19937 rng(2);
    std::uniform_real_distribution<double> noise(-3.0, 3.0);
    auto rough = field;
    for (double& v : rough.values()) v += noise(rng);
    cfg.damping = std::numeric_limits<double>::min();
    CHECK(taylor_correct(rough, fd_partials(rough), s, cfg) == rough);
}

TEST_CASE("one damped step closes 40% of a perturbation on a linear field") {
    const auto plane = [](int i, int j) { return 1.0 + 2.0 * j + 3.0 * i; };
    const auto exact = from_function(5, 5, plane);
    const GuidingPoint s[] = {GuidingPoint::at_cell(2, 2, plane(2, 2))};
    auto perturbed = exact;
    perturbed(0, 4) += 5.0;
    perturbed(4, 0) -= 2.5;
    // partials of the exact plane at the guiding point
    const auto p = fd_partials(exact);
    SmoothConfig cfg;
    cfg.damping = 0.4;
    const auto out = taylor_correct(perturbed, p, s, cfg);
    CHECK(out(0, 4) == doctest::Approx(exact(0, 4) + 0.6 * 5.0));
    CHECK(out(4, 0) == doctest::Approx(exact(4, 0) - 0.6 * 2.5));
    CHECK(out(1, 1) == doctest::Approx(exact(1, 1)));
}

TEST_CASE("taylor_correct never overshoots its prediction") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int t = 0; t < 50; ++t) {
        const auto field = from_function(6, 8, [&](int, int) { return u(rng); });
        const GuidingPoint s[] = {GuidingPoint::at_cell(1, 2, u(rng)), GuidingPoint::at_cell(4, 6, u(rng))};
        SmoothConfig cfg;
        cfg.damping = 0.05 + 0.44 * (t / 50.0);
        const auto p = fd_partials(field);
        const auto step = taylor_correct(field, p, s, cfg);
        // prediction recovered from the blend: pred = old + (new - old) / damping
        for (std::size_t k = 0; k < field.size(); ++k) {
            const double old = field.values()[k];
            const double now = step.values()[k];
            const double pred = old + (now - old) / cfg.damping;
            if (old != pred) CHECK(std::abs(now - pred) < std::abs(old - pred));
        }
    }
}

TEST_CASE("taylor_correct validation") {
    const HeadField f(3, 3, 1.0);
    const auto p = fd_partials(f);
    SmoothConfig cfg;
    CHECK_THROWS_AS(taylor_correct(f, p, std::span<const GuidingPoint>{}, cfg), std::invalid_argument);
    const GuidingPoint s[] = {GuidingPoint::at_cell(1, 1, 1.0)};
    cfg.damping = 0.5;
    CHECK_THROWS_AS(taylor_correct(f, p, s, cfg), std::invalid_argument);
    cfg.damping = 0.0;
    CHECK_THROWS_AS(taylor_correct(f, p, s, cfg), std::invalid_argument);
    cfg.damping = 0.4;
    const GuidingPoint off[] = {GuidingPoint::at_cell(3, 1, 1.0)};
    CHECK_THROWS_AS(taylor_correct(f, p, off, cfg), std::invalid_argument);
}

TEST_CASE("smooth_fit with one sample gives a constant field") {
    for (auto [rows, cols, i, j] : {std::array{6, 9, 2, 3}, std::array{5, 5, 0, 0}, std::array{1, 4, 0, 2}}) {
        const auto g = build_grid(rows, cols);
        const GuidingPoint s[] = {GuidingPoint::at_cell(i, j, 7.31)};
        const double values[] = {7.31};
        const auto r = smooth_fit(g, s, Quantizer::with_levels(values, 16), SmoothConfig{});
        for (double v : r.field.values()) CHECK(v == 7.31);
        CHECK(r.report.converged);
        CHECK(r.report.extended);
    }
}

TEST_CASE("smooth_fit reproduces a sampled plane within one level") {
    const auto plane = [](int i, int j) { return 50.0 + 0.3 * j - 0.2 * i; };
    const auto g = build_grid(22, 22);
    const auto s = plane_samples(22, 22, 3, plane);
    const Quantizer q(0.5, 40.0);
    const auto r = smooth_fit(g, s, q, SmoothConfig{});
    CHECK(r.report.extended);
    double worst = 0.0;
    for (int i = 0; i < 22; ++i)
        for (int j = 0; j < 22; ++j) worst = std::max(worst, std::abs(r.field(i, j) - plane(i, j)));
    CHECK(worst <= q.ratio);
    for (const auto& p : s) CHECK(r.field[*p.cell] == p.value);

    // quantized output is (near) gradually varied
    LevelField levels;
    for (double v : r.field.values()) levels.levels.push_back(q.level(v));
    int bad = 0;
    for (const auto& [a, b] : g.edges()) bad += std::abs(levels.levels[a] - levels.levels[b]) > 1;
    CHECK(bad < 0.01 * static_cast<double>(g.edge_count()));
}

TEST_CASE("smooth_fit falls back to Algorithm A on infeasible samples") {
    const auto g = build_grid(8, 8);
    const GuidingPoint s[] = {GuidingPoint::at_cell(3, 3, 0.0), GuidingPoint::at_cell(3, 4, 10.0),
                              GuidingPoint::at_cell(7, 0, 4.0)};
    const Quantizer q(1.0, -0.5);
    const auto r = smooth_fit(g, s, q, SmoothConfig{});
    CHECK_FALSE(r.report.extended);
    CHECK(r.report.fallback_passes > 0);
    for (const auto& p : s) CHECK(r.field[*p.cell] == p.value);
    CHECK(r.field.all_finite());
}

TEST_CASE("smooth_fit terminates and records bounded changes") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    std::vector<GuidingPoint> s;
    for (int k = 0; k < 12; ++k)
        s.push_back(GuidingPoint::at_cell(static_cast<int>(rng() % 15), static_cast<int>(rng() % 15), u(rng)));
    // drop repeated cells
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return *a.cell < *b.cell; });
    s.erase(std::unique(s.begin(), s.end(), [](const auto& a, const auto& b) { return *a.cell == *b.cell; }), s.end());
    SmoothConfig cfg;
    cfg.max_iterations = 40;
    std::vector<double> values;
    for (const auto& p : s) values.push_back(p.value);
    const auto r = smooth_fit(build_grid(15, 15), s, Quantizer::with_levels(values, 10), cfg);
    CHECK(r.report.iterations <= 40);
    CHECK(r.report.changes.size() == static_cast<std::size_t>(r.report.iterations));
    for (double c : r.report.changes) CHECK(std::isfinite(c));
    CHECK(r.report.converged == (r.report.final_change < cfg.tolerance));
    for (const auto& p : s) CHECK(r.field[*p.cell] == p.value);
}

TEST_CASE("smooth_fit does not depend on the worker count") {
    const auto plane = [](int i, int j) { return 3.0 * std::sin(0.3 * i) + 0.1 * j * j; };
    const auto s = plane_samples(30, 25, 4, plane);
    std::vector<double> values;
    for (const auto& p : s) values.push_back(p.value);
    const auto q = Quantizer::with_levels(values, 20);
    SmoothConfig one;
    SmoothConfig many;
    many.workers = 6;
    const auto a = smooth_fit(build_grid(30, 25), s, q, one);
    const auto b = smooth_fit(build_grid(30, 25), s, q, many);
    CHECK(a.field == b.field);
    CHECK(a.report.iterations == b.report.iterations);
}

TEST_CASE("smooth_fit second-order terms keep the interpolation contract") {
    const auto curve = [](int i, int j) { return 0.05 * (i - 6) * (i - 6) + 0.03 * j * j; };
    const auto s = plane_samples(14, 14, 3, curve);
    std::vector<double> values;
    for (const auto& p : s) values.push_back(p.value);
    SmoothConfig cfg;
    cfg.second_order = true;
    const auto r = smooth_fit(build_grid(14, 14), s, Quantizer::with_levels(values, 12), cfg);
    for (const auto& p : s) CHECK(r.field[*p.cell] == p.value);
    CHECK(r.field.all_finite());
}

TEST_CASE("smooth_fit rejects multilevel, conflicts and missing samples") {
    const auto g = build_grid(4, 4);
    const GuidingPoint s[] = {GuidingPoint::at_cell(1, 1, 2.0)};
    const Quantizer q(1.0, 0.0);
    SmoothConfig cfg;
    cfg.multilevel = true;
    CHECK_THROWS_AS(smooth_fit(g, s, q, cfg), UnsupportedError);
    CHECK_THROWS_AS(smooth_fit(g, std::span<const GuidingPoint>{}, q, SmoothConfig{}), std::invalid_argument);
    const GuidingPoint clash[] = {GuidingPoint::at_cell(1, 1, 2.0), GuidingPoint::at_cell(1, 1, 2.2)};
    CHECK_THROWS_AS(smooth_fit(g, clash, q, SmoothConfig{}), ConflictError);
}

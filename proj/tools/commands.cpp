/**
 * @file commands.cpp
 * @brief check / fit / simulate drivers and argument parsing
 */

#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gvflow/gvflow.hpp"

namespace gvflow::cli {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<GuidingPoint> load_points(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return parse_well_log(in);
}

/// Rejects empty input and coincident records that disagree.
void require_usable(const std::vector<GuidingPoint>& points) {
    if (points.empty()) throw Error("no points in input");
    if (const auto clash = find_coincident_conflict(points)) {
        const auto& a = points[clash->first];
        const auto& b = points[clash->second];
        throw ConflictError("conflict: records " + std::to_string(clash->first + 1) + " and " +
                            std::to_string(clash->second + 1) + " are at (" + full(a.lat) + ", " +
                            full(a.lon) + ") with values " + full(a.value) + " and " +
                            full(b.value));
    }
}

GeoGrid resolve_grid(const std::vector<GuidingPoint>& points, int target_cells) {
    return determine_resolution(bounding_box(points), target_cells);
}

Quantizer make_quantizer(const std::vector<GuidingPoint>& points, const RunConfig& cfg) {
    std::vector<double> values;
    values.reserve(points.size());
    for (const auto& p : points) values.push_back(p.value);
    if (cfg.ratio) return Quantizer::for_values(values, *cfg.ratio);
    return Quantizer::with_levels(values, cfg.levels);
}

SmoothConfig make_smooth_config(const RunConfig& cfg) {
    SmoothConfig s;
    s.damping = cfg.damping;
    s.tolerance = cfg.tolerance;
    s.max_iterations = cfg.max_iter.value_or(500);
    s.second_order = cfg.second_order;
    s.multilevel = cfg.multilevel;
    s.workers = cfg.threads;
    s.validate();
    return s;
}

std::optional<double> as_number(const std::string& text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc() && ptr == text.data() + text.size()) return v;
    return std::nullopt;
}

FlowParams make_flow_params(const RunConfig& cfg, const GeoGrid& grid) {
    const bool group_any = cfg.conductivity || cfg.thickness || cfg.storage || cfg.dt || cfg.cell;
    const bool group_all = cfg.conductivity && cfg.thickness && cfg.storage && cfg.dt && cfg.cell;
    if (cfg.alpha.has_value() == group_any) {
        throw Error("give exactly one of --alpha or the --K --b --S --dt --cell group");
    }
    if (group_any && !group_all) throw Error("--K --b --S --dt --cell must all be given together");

    FlowParams p;
    if (cfg.alpha) {
        p.alpha = *cfg.alpha;
    } else {
        p = FlowParams::from_hydrogeology(*cfg.conductivity, *cfg.thickness, *cfg.storage, *cfg.dt,
                                          *cfg.cell);
    }

    p.source = HeadField(grid.rows, grid.cols, 0.0);
    if (const auto scalar = as_number(cfg.source)) {
        std::fill(p.source.values().begin(), p.source.values().end(), *scalar);
    } else {
        const auto wells = load_points(cfg.source);
        for (const auto& w : wells) {
            const GuidingPoint single[] = {w};
            const auto located = locate(single, grid);
            p.source[*located.front().cell] += w.value;
        }
    }
    p.validate(grid.rows, grid.cols);
    return p;
}

void write_field(const HeadField& field, const RunConfig& cfg, const std::string& path) {
    export_field(field, cfg.format, std::filesystem::path(path), ExportOptions{cfg.invert});
}

int guarded(std::ostream& err, auto&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

} // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto raw = load_points(cfg.input);
        require_usable(raw);
        const auto grid = resolve_grid(raw, cfg.target_cells);
        const auto q = make_quantizer(raw, cfg);
        const GridDomain domain(grid.rows, grid.cols);

        bool feasible = true;
        std::vector<std::string> lines;
        for (const auto& snap : group_snapshots(raw)) {
            const auto located = locate(snap.points, grid);
            std::vector<LevelSample> levels;
            for (const auto& p : located) levels.push_back({domain.vertex(*p.cell), q.level(p.value)});
            const auto verdict = feasibility_check(domain, levels);
            if (verdict) continue;
            feasible = false;
            auto describe = [&](const LevelSample& s) {
                const auto it = std::find_if(located.begin(), located.end(), [&](const GuidingPoint& p) {
                    return domain.vertex(*p.cell) == s.vertex;
                });
                return "(" + full(it->lat) + ", " + full(it->lon) + ") value " + full(it->value) +
                       " level " + std::to_string(s.level) + " cell [" +
                       std::to_string(it->cell->row) + "," + std::to_string(it->cell->col) + "]";
            };
            const auto& v = *verdict.violation;
            std::string where = raw.front().time_index ? "time " + std::to_string(snap.time_index) + ": " : "";
            lines.push_back("violation: " + where + describe(v.first) + " and " + describe(v.second) +
                            ": grid distance " + std::to_string(v.distance) + " < level difference " +
                            std::to_string(std::abs(v.first.level - v.second.level)));
        }

        out << (feasible ? "FEASIBLE" : "INFEASIBLE") << '\n';
        out << "quantizer: ratio " << full(q.ratio) << " origin " << full(q.origin) << '\n';
        out << "grid: " << grid.rows << " x " << grid.cols << " cells of " << full(grid.lat_det)
            << " degrees\n";
        for (const auto& l : lines) out << l << '\n';
        return feasible ? kSuccess : kInfeasible;
    });
}

int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (cfg.output.empty()) throw Error("an output path is required (-o)");
        const auto raw = load_points(cfg.input);
        require_usable(raw);
        if (group_snapshots(raw).size() > 1) {
            throw Error("input holds several time indices; use `simulate`");
        }
        const auto grid = resolve_grid(raw, cfg.target_cells);
        const auto points = locate(raw, grid);
        const auto q = make_quantizer(raw, cfg);
        const GridDomain domain(grid.rows, grid.cols);

        HeadField field;
        bool converged = false;
        if (cfg.algorithm == "a") {
            double mean = 0.0;
            for (const auto& p : points) mean += p.value;
            mean /= static_cast<double>(points.size());
            AlgorithmAOptions opts;
            opts.ratio = q.ratio;
            opts.passes = cfg.max_iter.value_or(10);
            opts.workers = cfg.threads;
            auto fit = algorithm_a_fit(HeadField(grid.rows, grid.cols, mean), points, opts);
            out << "algorithm A: passes " << fit.passes << ", final change " << num(fit.last_change)
                << '\n';
            field = std::move(fit.field);
            converged = fit.converged;
        } else if (cfg.algorithm == "smooth") {
            auto fit = smooth_fit(domain, points, q, make_smooth_config(cfg));
            out << "smooth fit: " << (fit.report.extended ? "gradually varied extension" : "Algorithm A fallback")
                << ", iterations " << fit.report.iterations << ", final change "
                << num(fit.report.final_change) << '\n';
            field = std::move(fit.field);
            converged = fit.report.converged;
        } else {
            throw Error("unknown algorithm '" + cfg.algorithm + "' (expected a or smooth)");
        }
        field.set_georef(grid.georef());
        write_field(field, cfg, cfg.output);
        out << "grid: " << grid.rows << " x " << grid.cols << ", wrote " << cfg.output << '\n';
        if (!converged) {
            err << "warning: did not converge within the iteration limit; field written anyway\n";
            return kNotConverged;
        }
        return kSuccess;
    });
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (cfg.output.empty()) throw Error("an output prefix is required (-o)");
        const auto raw = load_points(cfg.input);
        require_usable(raw);
        if (!raw.front().time_index) throw Error("simulate needs a time column in the input");
        const auto grid = resolve_grid(raw, cfg.target_cells);
        auto snapshots = group_snapshots(raw);
        for (auto& snap : snapshots) snap.points = locate(snap.points, grid);
        const auto q = make_quantizer(raw, cfg);
        const GridDomain domain(grid.rows, grid.cols);

        SequenceOptions opts;
        opts.smooth = make_smooth_config(cfg);
        opts.flow.tolerance = cfg.flow_tolerance;
        opts.flow.max_iter = cfg.flow_max_iter;
        opts.flow.workers = cfg.threads;
        opts.clamp_three_levels = cfg.clamp3;
        const auto params = make_flow_params(cfg, grid);

        const auto steps = simulate_sequence(snapshots, domain, params, q, opts);
        bool converged = true;
        out << "grid: " << grid.rows << " x " << grid.cols << ", alpha " << num(params.alpha) << '\n';
        for (const auto& step : steps) {
            HeadField field = step.field;
            field.set_georef(grid.georef());
            const std::string path =
                cfg.output + "_t" + std::to_string(step.time_index) + "." + std::string(file_extension(cfg.format));
            write_field(field, cfg, path);
            out << "t=" << step.time_index << " fit iterations " << step.fit.iterations << " change "
                << num(step.fit.final_change);
            converged = converged && step.fit.converged;
            if (step.flow) {
                out << " flow iterations " << step.flow->iterations << " residual "
                    << num(step.flow->residual_norm);
                converged = converged && step.flow->converged;
            }
            out << " -> " << path << '\n';
        }
        if (!converged) {
            err << "warning: at least one step did not converge; fields written anyway\n";
            return kNotConverged;
        }
        return kSuccess;
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gradually varied reconstruction and flow simulation of hydraulic head", "gvflow"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "asciigrid";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", cfg.input, "Well-log file (value lat lon [time])")->required();
        sub->add_option("--ratio", cfg.ratio, "Head units per level")->check(CLI::PositiveNumber);
        sub->add_option("--levels", cfg.levels, "Level count used when --ratio is absent")
            ->check(CLI::PositiveNumber);
        sub->add_option("--cells", cfg.target_cells, "Target grid cell count")->check(CLI::Range(4, 100000000));
        sub->add_option("--threads", cfg.threads, "Worker threads for grid sweeps")->check(CLI::PositiveNumber);
    };
    auto add_fitting = [&](CLI::App* sub) {
        sub->add_option("-o,--output", cfg.output, "Output path (fit) or prefix (simulate)")->required();
        sub->add_option("--damping", cfg.damping, "Taylor blend ratio in (0, 0.5)");
        sub->add_option("--tol", cfg.tolerance, "Smoothing tolerance (max change per sweep)");
        sub->add_option("--max-iter", cfg.max_iter, "Smoothing iterations (Algorithm A passes with --algorithm a)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "pgm | asciigrid | csv")
            ->check(CLI::IsMember({"pgm", "asciigrid", "csv"}));
        sub->add_flag("--invert", cfg.invert, "PGM: bright pixels for low values");
        sub->add_flag("--second-order", cfg.second_order, "Include quadratic Taylor terms");
        sub->add_flag("--multilevel", cfg.multilevel, "Reserved (rejected)");
    };

    auto* check = app.add_subcommand("check", "Report whether the data admits a gradually varied fit");
    add_common(check);

    auto* fit = app.add_subcommand("fit", "Fit one surface and export it");
    add_common(fit);
    add_fitting(fit);
    fit->add_option("--algorithm", cfg.algorithm, "a | smooth")->check(CLI::IsMember({"a", "smooth"}));

    auto* sim = app.add_subcommand("simulate", "Fit each time index and couple them by the flow equation");
    add_common(sim);
    add_fitting(sim);
    sim->add_option("--alpha", cfg.alpha, "Diffusion number (>= 0)");
    sim->add_option("--K", cfg.conductivity, "Hydraulic conductivity");
    sim->add_option("--b", cfg.thickness, "Aquifer thickness");
    sim->add_option("--S", cfg.storage, "Storage coefficient");
    sim->add_option("--dt", cfg.dt, "Time step");
    sim->add_option("--cell", cfg.cell, "Cell size in length units");
    sim->add_option("--G", cfg.source, "Sink per cell: a number, or a well-log file of per-cell sinks");
    sim->add_option("--flow-tol", cfg.flow_tolerance, "Flow residual tolerance (head units)");
    sim->add_option("--flow-max-iter", cfg.flow_max_iter, "Flow Jacobi sweep limit")->check(CLI::PositiveNumber);
    sim->add_flag("--clamp3", cfg.clamp3, "Clamp per-sweep changes to three levels");

    try {
        std::vector<std::string> args;
        for (int k = argc - 1; k >= 1; --k) args.emplace_back(argv[k]);
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }
    cfg.format = parse_export_format(format);

    if (*check) return cmd_check(cfg, out, err);
    if (*fit) return cmd_fit(cfg, out, err);
    return cmd_simulate(cfg, out, err);
}

} // namespace gvflow::cli

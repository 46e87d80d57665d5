#include "mapdist/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mapdist/convergence.hpp"
#include "mapdist/examples.hpp"
#include "mapdist/io.hpp"
#include "mapdist/map_metric.hpp"
#include "mapdist/radius.hpp"

namespace mapdist {

namespace {

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::vector<unsigned> parse_unsigned_list(const std::string& csv) {
    std::vector<unsigned> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(static_cast<unsigned>(std::stoul(item)));
    }
    return out;
}

void emit_oscillation_csv(const ConvergenceReport& report, const FamilySample& family,
                          std::ostream& out) {
    out << "index,time,tail_oscillation\n";
    for (std::size_t i = 0; i < report.tail_oscillation.size(); ++i) {
        out << i << ',' << format_full(family.times[i]) << ','
            << format_full(report.tail_oscillation[i]) << '\n';
    }
    out << "verdict," << verdict_name(report.verdict) << '\n';
}

void emit_plot_file(const ConvergenceReport& report, const FamilySample& family,
                    const std::string& path) {
    std::ofstream plot(path);
    if (!plot) throw input_error("cannot write plot file: " + path);
    plot << "# index time tail_oscillation\n";
    for (std::size_t i = 0; i < report.tail_oscillation.size(); ++i) {
        plot << i << ' ' << format_full(family.times[i]) << ' '
             << format_full(report.tail_oscillation[i]) << '\n';
    }
}

struct ConvergeArgs {
    std::string family;
    std::string target;
    std::string exhaustion = "full";
    std::string limit_out;
    std::string plot;
    ConvergenceOptions options;
};

int run_converge(const ConvergeArgs& args, bool require_limit, std::ostream& out) {
    FamilySample family = load_family(args.family);
    TargetMetric metric = TargetMetric::parse(args.target);
    Exhaustion exhaustion = parse_exhaustion_spec(args.exhaustion, family.grid);

    ConvergenceReport report = is_cauchy(family, exhaustion, metric, args.options);
    emit_oscillation_csv(report, family, out);
    if (!args.plot.empty()) emit_plot_file(report, family, args.plot);

    if (report.verdict == Verdict::cauchy && !args.limit_out.empty()) {
        PartialMap limit = construct_limit(family, exhaustion, metric, args.options);
        write_map(limit, std::filesystem::path(args.limit_out));
        out << "limit_written," << args.limit_out << '\n';
    } else if (require_limit && report.verdict != Verdict::cauchy) {
        return 3;
    }
    return report.verdict == Verdict::diverges ? 3 : 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"distances, convergence diagnostics, and radius-of-convergence "
                 "brackets for partial maps on gridded domains"};
    app.require_subcommand(1);

    // --- dist ---
    auto* dist = app.add_subcommand("dist", "distance between two map files");
    std::string dist_a, dist_b, dist_target, dist_mask, dist_exh;
    double alpha = 1.0;
    dist->add_option("--a", dist_a, "first map file")->required();
    dist->add_option("--b", dist_b, "second map file")->required();
    dist->add_option("--target", dist_target, "target metric spec")->required();
    dist->add_option("--alpha", alpha, "penalty ceiling (default 1)");
    auto* mask_opt = dist->add_option("--mask", dist_mask, "window mask: `full` or a map file");
    auto* exh_opt = dist->add_option("--exhaustion", dist_exh, "exhaustion spec");
    mask_opt->excludes(exh_opt);

    // --- converge ---
    auto* converge = app.add_subcommand("converge", "Cauchy diagnostic for a family");
    ConvergeArgs cargs;
    unsigned jobs = 1;
    converge->add_option("--family", cargs.family, "manifest file or directory")->required();
    converge->add_option("--target", cargs.target, "target metric spec")->required();
    converge->add_option("--exhaustion", cargs.exhaustion, "exhaustion spec (default full)");
    converge->add_option("--cauchy-threshold", cargs.options.threshold, "verdict threshold");
    converge->add_option("--window", cargs.options.window_fraction, "tail window fraction");
    converge->add_option("--jobs", jobs, "worker threads for distance tables");
    converge->add_option("--limit-out", cargs.limit_out, "write the constructed limit here");
    converge->add_option("--plot", cargs.plot, "write a gnuplot-style oscillation curve");

    // --- limit ---
    auto* limit_cmd = app.add_subcommand("limit", "construct the limit of a Cauchy family");
    ConvergeArgs largs;
    unsigned limit_jobs = 1;
    std::string limit_out_path;
    limit_cmd->add_option("--family", largs.family, "manifest file or directory")->required();
    limit_cmd->add_option("--target", largs.target, "target metric spec")->required();
    limit_cmd->add_option("--exhaustion", largs.exhaustion, "exhaustion spec (default full)");
    limit_cmd->add_option("--cauchy-threshold", largs.options.threshold, "verdict threshold");
    limit_cmd->add_option("--window", largs.options.window_fraction, "tail window fraction");
    limit_cmd->add_option("--jobs", limit_jobs, "worker threads for distance tables");
    limit_cmd->add_option("--out", limit_out_path, "output map file")->required();

    // --- radius ---
    auto* radius = app.add_subcommand("radius", "radius-of-convergence bracket");
    std::string rad_family, rad_pert, rad_target, rad_exh = "full";
    RadiusOptions ropts;
    radius->add_option("--family", rad_family, "manifest file or directory")->required();
    radius->add_option("--perturbation", rad_pert, "manifest of a perturbed family");
    radius->add_option("--target", rad_target, "target metric spec")->required();
    radius->add_option("--exhaustion", rad_exh, "exhaustion spec (default full)");
    radius->add_option("--window", ropts.window_fraction, "tail window fraction");
    radius->add_option("--cauchy-threshold", ropts.convergence.threshold,
                       "threshold used to validate certificates");
    radius->add_option("--jobs", ropts.convergence.jobs, "worker threads");

    // --- example ---
    auto* example = app.add_subcommand("example", "generate a worked example family");
    std::string ex_kind, ex_out = ".", ex_mlist = "2,4,8,16", ex_times;
    double ex_q = 1.0, ex_power = 2.0;
    std::size_t ex_depth = 8, ex_cells = 0, ex_levels = 5;
    example->add_option("--kind", ex_kind, "wave | oscillation | strip | shrinking | constant")
        ->required();
    example->add_option("--out", ex_out, "output directory");
    example->add_option("--m-list", ex_mlist, "wave heights (comma separated)");
    example->add_option("--q", ex_q, "oscillation amplitude");
    example->add_option("--depth", ex_depth, "oscillation extremal-time depth");
    example->add_option("--cells", ex_cells, "grid cells (0 = per-kind default)");
    example->add_option("--levels", ex_levels, "strip exhaustion levels");
    example->add_option("--power", ex_power, "shrinking-domain value power");
    example->add_option("--times", ex_times, "extra sample times (comma separated)");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        if (dist->parsed()) {
            PartialMap a = read_map(std::filesystem::path(dist_a));
            PartialMap b = read_map(std::filesystem::path(dist_b));
            TargetMetric metric = TargetMetric::parse(dist_target);
            if (!dist_exh.empty()) {
                Exhaustion e = parse_exhaustion_spec(dist_exh, a.grid());
                ExhaustionDistance r = dist_exhaustion(e, a, b, metric);
                out << format_full(r.value) << ',' << format_full(r.tail_bound) << '\n';
            } else {
                DomainMask window =
                    parse_mask_spec(dist_mask.empty() ? "full" : dist_mask, a.grid());
                double v = dist_on(window, a, b, metric, alpha);
                out << format_full(v) << ",0\n";
            }
            return 0;
        }
        if (converge->parsed()) {
            cargs.options.jobs = jobs;
            return run_converge(cargs, false, out);
        }
        if (limit_cmd->parsed()) {
            largs.options.jobs = limit_jobs;
            largs.limit_out = limit_out_path;
            return run_converge(largs, true, out);
        }
        if (radius->parsed()) {
            FamilySample family = load_family(rad_family);
            TargetMetric metric = TargetMetric::parse(rad_target);
            Exhaustion exhaustion = parse_exhaustion_spec(rad_exh, family.grid);
            RadiusReport report;
            if (!rad_pert.empty()) {
                FamilySample pert = load_family(rad_pert);
                report = radius_report(family, exhaustion, metric, &pert, ropts);
            } else {
                report = radius_report(family, exhaustion, metric, nullptr, ropts);
            }
            out << "lower,upper,witness_time_first,witness_time_second,certificate,verdict,"
                   "target,exhaustion,note\n";
            out << format_full(report.lower) << ','
                << (report.upper_finite() ? format_full(report.upper) : "inf") << ','
                << format_full(report.witness_time_first) << ','
                << format_full(report.witness_time_second) << ',' << report.certificate << ','
                << report.verdict() << ',' << report.metric_desc << ','
                << report.exhaustion_desc << ',' << report.note << '\n';
            return 0;
        }
        if (example->parsed()) {
            FamilySample family;
            std::vector<double> extra = ex_times.empty() ? std::vector<double>{}
                                                         : parse_double_list(ex_times);
            if (ex_kind == "wave") {
                family = gen_wave(parse_unsigned_list(ex_mlist),
                                  ex_cells == 0 ? 240 : ex_cells);
            } else if (ex_kind == "oscillation") {
                family = gen_oscillation(ex_q, ex_depth, ex_cells == 0 ? 600 : ex_cells, extra);
            } else if (ex_kind == "strip") {
                std::vector<double> times = extra.empty()
                    ? std::vector<double>{0.5, 0.25, 0.125, 0.0625}
                    : extra;
                family = gen_strip(times, ex_levels, ex_cells == 0 ? 10 : ex_cells).family;
            } else if (ex_kind == "shrinking") {
                std::vector<double> times = extra;
                if (times.empty()) {
                    for (int j = 1; j <= 12; ++j) times.push_back(1.0 / (j + 1.0));
                }
                family = gen_shrinking(ex_power, times, ex_cells == 0 ? 200 : ex_cells);
            } else if (ex_kind == "constant") {
                std::size_t cells = ex_cells == 0 ? 100 : ex_cells;
                GridPtr grid = make_interval_grid(0.0, 1.0, cells);
                std::vector<double> values(cells);
                for (std::size_t c = 0; c < cells; ++c) values[c] = grid->cell_midpoint(c)[0];
                PartialMap map(DomainMask::full(grid), 1, std::move(values));
                std::vector<double> times = extra.empty()
                    ? std::vector<double>{1.0, 0.5, 0.25, 0.125}
                    : extra;
                family = gen_constant(map, times);
            } else {
                throw input_error("unknown example kind: " + ex_kind);
            }
            write_family(family, ex_out, ex_kind);
            out << "samples," << family.size() << '\n';
            out << "manifest," << (std::filesystem::path(ex_out) / "manifest").string() << '\n';
            return 0;
        }
    } catch (const input_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << app.help();
    return 2;
}

}  // namespace mapdist

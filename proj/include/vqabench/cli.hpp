#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqabench/io.hpp"
#include "vqabench/parallel.hpp"
#include "vqabench/svg.hpp"

namespace vqabench {

// Seed streams: instances draw from (master, 1, index), restarts from
// (master, 2, index << 32 | restart). Restart seeds are shared across
// optimizers and objectives so every series starts from the same phases.
inline std::uint64_t instance_seed(std::uint64_t master, std::size_t index) {
    return derive_seed(master, 1, static_cast<std::uint64_t>(index));
}
inline std::uint64_t restart_seed(std::uint64_t master, std::size_t instance_index,
                                  std::size_t restart_index) {
    return derive_seed(master, 2,
                       (static_cast<std::uint64_t>(instance_index) << 32) |
                           static_cast<std::uint64_t>(restart_index));
}

/// Settings of a benchmark run; flags override config-file values which
/// override these defaults.
struct RunConfig {
    std::string ensemble_path;
    std::string out_dir;
    int depth = 3;
    int max_evals = 2000;
    int restarts = 20;
    std::uint64_t master_seed = 1;
    double tol = 1e-4;
    std::vector<OptimizerKind> optimizers{OptimizerKind::nelder_mead,
                                          OptimizerKind::quasi_newton};
    std::vector<ObjectiveKind> objectives{ObjectiveKind::mean_energy(),
                                          ObjectiveKind::optimal_cost(0.1)};
    unsigned workers = 0;  // 0: VQABENCH_WORKERS or hardware concurrency
};

/// Reads RunConfig fields from a JSON config file; keys are optional and the
/// same names as the manifest fields.
inline RunConfig run_config_from_file(const std::filesystem::path& path,
                                      RunConfig base = {}) {
    const std::string what = "config file " + path.string();
    const nlohmann::json j = detail::parse_json(read_text_file(path), what);
    if (j.contains("ensemble")) base.ensemble_path = j["ensemble"].get<std::string>();
    if (j.contains("out_dir")) base.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("depth")) base.depth = j["depth"].get<int>();
    if (j.contains("max_evals")) base.max_evals = j["max_evals"].get<int>();
    if (j.contains("restarts")) base.restarts = j["restarts"].get<int>();
    if (j.contains("master_seed")) base.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("tol")) base.tol = j["tol"].get<double>();
    if (j.contains("workers")) base.workers = j["workers"].get<unsigned>();
    if (j.contains("optimizers")) {
        base.optimizers.clear();
        for (const auto& o : j["optimizers"])
            base.optimizers.push_back(parse_optimizer(o.get<std::string>()));
    }
    if (j.contains("objectives")) {
        base.objectives.clear();
        for (const auto& b : j["objectives"])
            base.objectives.push_back(parse_objective(b.get<std::string>()));
    }
    return base;
}

// ---------------------------------------------------------------------------
// generate

/// Writes an ensemble of `count` random instances; instance i is generated
/// from the derived seed (seed, 1, i).
inline void cmd_generate(int n_vars, int count, std::uint64_t seed,
                         const std::filesystem::path& out_path) {
    if (count < 1) throw std::invalid_argument("generate: count must be >= 1");
    std::vector<IsingInstance> instances;
    instances.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        instances.push_back(
            generate_instance(n_vars, instance_seed(seed, static_cast<std::size_t>(i))));
    write_ensemble(out_path, instances);
}

// ---------------------------------------------------------------------------
// run

/// Executes the optimizer x objective cross product over the ensemble and
/// writes one trace file per (instance, optimizer, objective, restart).
/// Completed trace files are skipped, so an interrupted run can be re-invoked.
/// Returns the number of traces executed (excluding skipped ones).
inline int cmd_run(const RunConfig& config) {
    if (config.ensemble_path.empty())
        throw std::invalid_argument("run: ensemble path is required");
    if (config.out_dir.empty())
        throw std::invalid_argument("run: output directory is required");
    if (config.depth < 1 || config.max_evals < 1 || config.restarts < 1)
        throw std::invalid_argument("run: depth, max_evals and restarts must be >= 1");
    if (config.optimizers.empty() || config.objectives.empty())
        throw std::invalid_argument("run: need at least one optimizer and objective");

    const auto instances = read_ensemble(config.ensemble_path);
    const std::filesystem::path out(config.out_dir);
    const std::filesystem::path traces = out / "traces";
    std::filesystem::create_directories(traces);

    RunManifest manifest;
    manifest.n_vars = instances.front().n_vars();
    manifest.instance_count = static_cast<int>(instances.size());
    manifest.depth = config.depth;
    manifest.max_evals = config.max_evals;
    manifest.restarts = config.restarts;
    manifest.master_seed = config.master_seed;
    manifest.tol = config.tol;
    manifest.optimizers = config.optimizers;
    manifest.objectives = config.objectives;
    for (const auto& inst : instances)
        if (inst.n_vars() != manifest.n_vars)
            throw schema_error("run: ensemble mixes problem sizes");

    const std::filesystem::path manifest_path = out / "manifest.json";
    if (std::filesystem::exists(manifest_path)) {
        const RunManifest existing = read_manifest(manifest_path);
        if (manifest_to_json(existing) != manifest_to_json(manifest))
            throw schema_error(
                "run: output directory holds a manifest with different settings");
    } else {
        write_manifest(manifest_path, manifest);
    }

    const std::string ensemble_bytes = read_text_file(config.ensemble_path);
    const std::filesystem::path ensemble_copy = out / "ensemble.json";
    if (std::filesystem::exists(ensemble_copy)) {
        if (read_text_file(ensemble_copy) != ensemble_bytes)
            throw schema_error("run: output directory belongs to a different ensemble");
    } else {
        write_text_file_atomic(ensemble_copy, ensemble_bytes);
    }

    struct Job {
        std::size_t instance;
        std::size_t restart;
        OptimizerKind optimizer;
        ObjectiveKind objective;
        std::filesystem::path path;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (const auto optimizer : config.optimizers)
            for (const auto& objective : config.objectives)
                for (std::size_t r = 0; r < static_cast<std::size_t>(config.restarts); ++r) {
                    const auto name = trace_filename(instance_label(i), optimizer,
                                                     objective, static_cast<int>(r));
                    if (std::filesystem::exists(traces / name)) continue;
                    jobs.push_back({i, r, optimizer, objective, traces / name});
                }

    const unsigned workers =
        config.workers ? config.workers : default_worker_count();
    parallel_for(jobs.size(), workers, [&](std::size_t k) {
        const Job& job = jobs[k];
        const EvaluationTrace trace = run_vqa(
            instances[job.instance], config.depth, job.optimizer, job.objective,
            config.max_evals, restart_seed(config.master_seed, job.instance, job.restart),
            instance_label(job.instance), config.tol);
        write_trace(job.path, trace);
    });
    return static_cast<int>(jobs.size());
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeConfig {
    std::vector<std::string> trace_dirs;
    std::string out_dir;
    double fig_c = 0.02;                              // fixed c for the per-budget curves
    double c_lo = 1e-4;                               // log grid for the cost sweep
    double c_hi = 10.0;
    int c_count = 20;
    std::vector<double> scaling_c = {0.0001, 0.034, 2.6};  // size-scaling panels
};

namespace detail {

struct SeriesKey {
    OptimizerKind optimizer;
    ObjectiveKind objective;

    std::string label() const {
        return optimizer_label(optimizer) + "|" + objective_label(objective);
    }
};

struct DirAnalysis {
    RunManifest manifest;
    std::vector<std::int64_t> ground;                     // per instance
    // per series: per instance results
    std::vector<std::vector<BenchmarkCurve>> fig1_curves;
    std::vector<std::vector<CostSweep>> sweeps;
};

inline std::vector<SeriesKey> series_of(const RunManifest& m) {
    std::vector<SeriesKey> keys;
    for (const auto optimizer : m.optimizers)
        for (const auto& objective : m.objectives)
            keys.push_back({optimizer, objective});
    return keys;
}

/// Loads one run directory and reduces every (series, instance) trace group to
/// its benchmark curve at fig_c and its cost sweep over `grid`.
inline DirAnalysis analyze_dir(const std::filesystem::path& dir, double fig_c,
                               const std::vector<double>& grid) {
    const std::string what = "run directory " + dir.string();
    if (!std::filesystem::exists(dir / "manifest.json"))
        throw schema_error(what + ": missing manifest.json");
    DirAnalysis out;
    out.manifest = read_manifest(dir / "manifest.json");
    const auto instances = read_ensemble(dir / "ensemble.json");
    if (static_cast<int>(instances.size()) != out.manifest.instance_count)
        throw schema_error(what + ": ensemble size disagrees with manifest");

    out.ground.reserve(instances.size());
    for (const auto& inst : instances)
        out.ground.push_back(full_spectrum(inst).ground_energy);

    const auto series = series_of(out.manifest);
    out.fig1_curves.resize(series.size());
    out.sweeps.resize(series.size());
    for (std::size_t si = 0; si < series.size(); ++si) {
        for (std::size_t i = 0; i < instances.size(); ++i) {
            std::vector<EvaluationTrace> traces;
            traces.reserve(static_cast<std::size_t>(out.manifest.restarts));
            for (int r = 0; r < out.manifest.restarts; ++r) {
                const auto path =
                    dir / "traces" /
                    trace_filename(instance_label(i), series[si].optimizer,
                                   series[si].objective, r);
                if (!std::filesystem::exists(path))
                    throw schema_error(what + ": incomplete run, missing " +
                                       path.filename().string());
                EvaluationTrace trace = read_trace(path);
                if (trace.n_vars != out.manifest.n_vars ||
                    trace.depth != out.manifest.depth ||
                    trace.max_evals != out.manifest.max_evals ||
                    trace.restart_seed !=
                        restart_seed(out.manifest.master_seed, i,
                                     static_cast<std::size_t>(r)))
                    throw schema_error(what + ": trace " + path.filename().string() +
                                       " conflicts with the manifest settings");
                traces.push_back(std::move(trace));
            }
            const auto agg = aggregate_restarts(traces);
            out.fig1_curves[si].push_back(benchmark_curve(agg, fig_c, out.ground[i]));
            out.sweeps[si].push_back(cost_sweep(agg, grid, out.ground[i]));
        }
    }
    return out;
}

inline CsvTable summary_to_csv(const EnsembleSummary& summary,
                               const std::string& label) {
    CsvTable table;
    table.columns = {"x", "median", "p25", "p75", "series"};
    for (std::size_t i = 0; i < summary.x.size(); ++i)
        table.rows.push_back({format_g17(summary.x[i]), format_g17(summary.median[i]),
                              format_g17(summary.p25[i]), format_g17(summary.p75[i]),
                              label});
    return table;
}

inline void append_rows(CsvTable& into, const CsvTable& from) {
    if (into.columns.empty()) into.columns = from.columns;
    into.rows.insert(into.rows.end(), from.rows.begin(), from.rows.end());
}

/// Extra fig2a series: per-c percentiles of the small-c line c * TtS and the
/// large-c line (mean energy at n=1) + c, both shifted by e_g.
inline CsvTable asymptote_rows(const std::vector<CostSweep>& sweeps,
                               const std::vector<double>& grid,
                               const std::string& label) {
    CsvTable table;
    table.columns = {"x", "median", "p25", "p75", "series"};
    for (const char* which : {"tts-asymptote", "mean-energy-asymptote"}) {
        const bool tts = std::string(which) == "tts-asymptote";
        for (const double c : grid) {
            std::vector<double> values;
            values.reserve(sweeps.size());
            for (const auto& s : sweeps)
                values.push_back(tts ? c * s.tts_reference
                                     : s.mean_energy_reference + c -
                                           static_cast<double>(s.ground_energy));
            table.rows.push_back({format_g17(c), format_g17(percentile(values, 0.50)),
                                  format_g17(percentile(values, 0.25)),
                                  format_g17(percentile(values, 0.75)),
                                  label + "|" + which});
        }
    }
    return table;
}

}  // namespace detail

/// Aggregates one or more run directories into figure CSVs: per-budget curves
/// at fig_c (fig1a/b/c per problem size), budget-optimized sweeps versus c
/// (fig2a/b/c per problem size), and, when at least two distinct problem
/// sizes are given, size-scaling tables per scaling c value (fig3*).
/// Returns the list of files written.
inline std::vector<std::filesystem::path> cmd_analyze(const AnalyzeConfig& config) {
    if (config.trace_dirs.empty())
        throw std::invalid_argument("analyze: at least one trace directory is required");
    if (config.out_dir.empty())
        throw std::invalid_argument("analyze: output directory is required");
    if (!(config.fig_c > 0.0))
        throw std::invalid_argument("analyze: fig c must be > 0");

    std::vector<double> grid = log_grid(config.c_lo, config.c_hi, config.c_count);
    for (const double c : config.scaling_c) {
        if (!(c > 0.0))
            throw std::invalid_argument("analyze: scaling c values must be > 0");
        grid.push_back(c);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<detail::DirAnalysis> dirs;
    dirs.reserve(config.trace_dirs.size());
    for (const auto& d : config.trace_dirs)
        dirs.push_back(detail::analyze_dir(d, config.fig_c, grid));

    // Cross-directory consistency: one directory per problem size, shared
    // settings except the restart count.
    std::set<int> sizes;
    for (const auto& d : dirs) {
        if (!sizes.insert(d.manifest.n_vars).second)
            throw schema_error("analyze: two run directories share the same N");
        const auto& first = dirs.front().manifest;
        if (d.manifest.depth != first.depth || d.manifest.max_evals != first.max_evals ||
            detail::series_of(d.manifest).size() != detail::series_of(first).size())
            throw schema_error("analyze: run directories disagree on settings");
        for (std::size_t si = 0; si < detail::series_of(first).size(); ++si) {
            const auto a = detail::series_of(d.manifest)[si];
            const auto b = detail::series_of(first)[si];
            if (a.optimizer != b.optimizer || !(a.objective == b.objective))
                throw schema_error("analyze: run directories disagree on series");
        }
    }

    const std::filesystem::path out(config.out_dir);
    std::filesystem::create_directories(out);
    std::vector<std::filesystem::path> written;

    struct Panel {
        const char* name;
        SummaryQuantity quantity;
    };
    constexpr Panel kFig1[] = {{"fig1a_cost", SummaryQuantity::cost_above_ground},
                               {"fig1b_evals", SummaryQuantity::optimal_evals},
                               {"fig1c_energy", SummaryQuantity::energy_above_ground}};
    constexpr Panel kFig2[] = {{"fig2a_cost", SummaryQuantity::cost_above_ground},
                               {"fig2b_evals", SummaryQuantity::optimal_evals},
                               {"fig2c_energy", SummaryQuantity::energy_above_ground}};

    // Per-N cost sweep summaries for the scaling report.
    std::vector<EnsembleSummary> sweep_cost_summaries;

    for (const auto& d : dirs) {
        const auto series = detail::series_of(d.manifest);
        const std::string suffix = "_N" + std::to_string(d.manifest.n_vars) + ".csv";

        for (const auto& panel : kFig1) {
            CsvTable table;
            for (std::size_t si = 0; si < series.size(); ++si) {
                SummaryMeta meta{d.manifest.n_vars, 0, series[si].optimizer,
                                 series[si].objective};
                const auto summary =
                    ensemble_summary(std::span<const BenchmarkCurve>(d.fig1_curves[si]),
                                     panel.quantity, meta);
                detail::append_rows(table, detail::summary_to_csv(summary, series[si].label()));
            }
            const auto path = out / (std::string(panel.name) + suffix);
            write_csv(path, table);
            written.push_back(path);
        }

        for (const auto& panel : kFig2) {
            CsvTable table;
            for (std::size_t si = 0; si < series.size(); ++si) {
                SummaryMeta meta{d.manifest.n_vars, 0, series[si].optimizer,
                                 series[si].objective};
                const auto summary = ensemble_summary(
                    std::span<const CostSweep>(d.sweeps[si]), panel.quantity, meta);
                detail::append_rows(table, detail::summary_to_csv(summary, series[si].label()));
                if (panel.quantity == SummaryQuantity::cost_above_ground) {
                    sweep_cost_summaries.push_back(summary);
                    detail::append_rows(
                        table, detail::asymptote_rows(d.sweeps[si], grid,
                                                      series[si].label()));
                }
            }
            const auto path = out / (std::string(panel.name) + suffix);
            write_csv(path, table);
            written.push_back(path);
        }
    }

    if (dirs.size() >= 2) {
        const auto series = detail::series_of(dirs.front().manifest);
        for (std::size_t ci = 0; ci < config.scaling_c.size(); ++ci) {
            CsvTable table;
            table.columns = {"x", "median", "p25", "p75", "series"};
            for (std::size_t si = 0; si < series.size(); ++si) {
                // Summaries were pushed dir-major: dirs.size() blocks of series.
                std::vector<EnsembleSummary> per_n;
                for (std::size_t di = 0; di < dirs.size(); ++di)
                    per_n.push_back(sweep_cost_summaries[di * series.size() + si]);
                const double c_list[] = {config.scaling_c[ci]};
                const auto rows = scaling_report(per_n, c_list);
                for (const auto& row : rows)
                    table.rows.push_back({format_g17(static_cast<double>(row.n_vars)),
                                          format_g17(row.median), format_g17(row.p25),
                                          format_g17(row.p75), series[si].label()});
            }
            const std::string name =
                ci < 3 ? std::string("fig3") + static_cast<char>('a' + ci) + "_scaling.csv"
                       : "fig3_c" + std::to_string(ci + 1) + "_scaling.csv";
            const auto path = out / name;
            write_csv(path, table);
            written.push_back(path);
        }
    }

    nlohmann::json meta;
    meta["format"] = "vqabench-analysis-manifest/1";
    meta["fig_c"] = config.fig_c;
    meta["c_grid"] = grid;
    meta["scaling_c"] = config.scaling_c;
    meta["inputs"] = config.trace_dirs;
    meta["files"] = nlohmann::json::array();
    for (const auto& p : written) meta["files"].push_back(p.filename().string());
    write_text_file_atomic(out / "analysis_manifest.json", meta.dump(2) + "\n");
    return written;
}

// ---------------------------------------------------------------------------
// plot

namespace detail {

struct AxisLabels {
    const char* prefix;
    const char* x;
    const char* y;
};

inline constexpr AxisLabels kAxisLabels[] = {
    {"fig1a", "circuit evaluations n", "C*(c) - e_g"},
    {"fig1b", "circuit evaluations n", "optimal circuit evaluations n*"},
    {"fig1c", "circuit evaluations n", "E*(c) - e_g"},
    {"fig2a", "cost per evaluation c", "C*(c) - e_g"},
    {"fig2b", "cost per evaluation c", "optimal circuit evaluations n*(c)"},
    {"fig2c", "cost per evaluation c", "E*(c) - e_g"},
    {"fig3", "problem size N", "C*(c) - e_g"},
};

}  // namespace detail

/// Renders one figure CSV (columns x, median, p25, p75, series) to an SVG
/// line chart with one line+band per series.
inline std::filesystem::path plot_csv(const std::filesystem::path& csv_path,
                                      const std::filesystem::path& out_dir,
                                      std::optional<bool> log_x = {},
                                      std::optional<bool> log_y = {}) {
    const std::string what = "figure csv " + csv_path.string();
    const CsvTable table = read_csv(csv_path);
    const std::size_t cx = csv_column(table, "x", what);
    const std::size_t cm = csv_column(table, "median", what);
    const std::size_t clo = csv_column(table, "p25", what);
    const std::size_t chi = csv_column(table, "p75", what);
    const std::size_t cs = csv_column(table, "series", what);

    std::vector<PlotSeries> series;
    std::map<std::string, std::size_t> index;
    for (const auto& row : table.rows) {
        const auto& label = row[cs];
        auto it = index.find(label);
        if (it == index.end()) {
            it = index.emplace(label, series.size()).first;
            series.push_back({label, {}, {}, {}, {}});
        }
        auto& s = series[it->second];
        s.x.push_back(parse_double(row[cx], what));
        s.y.push_back(parse_double(row[cm], what));
        s.y_low.push_back(parse_double(row[clo], what));
        s.y_high.push_back(parse_double(row[chi], what));
    }
    if (series.empty()) throw schema_error(what + ": no data rows");

    PlotOptions options;
    const std::string stem = csv_path.stem().string();
    options.title = stem;
    options.log_x = log_x;
    options.log_y = log_y;
    for (const auto& labels : detail::kAxisLabels) {
        if (stem.rfind(labels.prefix, 0) == 0) {
            options.x_label = labels.x;
            options.y_label = labels.y;
            break;
        }
    }

    std::filesystem::create_directories(out_dir);
    const auto out_path = out_dir / (stem + ".svg");
    write_text_file_atomic(out_path, render_line_chart(series, options));
    return out_path;
}

/// Plots explicit CSV files, or every fig*.csv in a directory input.
inline std::vector<std::filesystem::path> cmd_plot(
    const std::vector<std::string>& inputs, const std::filesystem::path& out_dir,
    std::optional<bool> log_x = {}, std::optional<bool> log_y = {}) {
    if (inputs.empty())
        throw std::invalid_argument("plot: at least one CSV file or directory");
    std::vector<std::filesystem::path> csvs;
    for (const auto& input : inputs) {
        if (std::filesystem::is_directory(input)) {
            std::vector<std::filesystem::path> found;
            for (const auto& entry : std::filesystem::directory_iterator(input)) {
                const auto name = entry.path().filename().string();
                if (entry.is_regular_file() && name.rfind("fig", 0) == 0 &&
                    entry.path().extension() == ".csv")
                    found.push_back(entry.path());
            }
            std::sort(found.begin(), found.end());
            if (found.empty())
                throw schema_error("plot: no fig*.csv files in " + input);
            csvs.insert(csvs.end(), found.begin(), found.end());
        } else {
            csvs.emplace_back(input);
        }
    }
    std::vector<std::filesystem::path> written;
    written.reserve(csvs.size());
    for (const auto& csv : csvs)
        written.push_back(plot_csv(csv, out_dir, log_x, log_y));
    return written;
}

}  // namespace vqabench

// vqabench: generate / run / analyze / plot for optimal-stopping benchmarks of
// variational circuit solvers. Exit codes: 0 success, 1 usage error,
// 2 data or schema error, 3 runtime failure.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vqabench/vqabench.hpp"

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v ? std::string(v) : fallback;
}

std::vector<vqabench::OptimizerKind> parse_optimizer_list(const std::vector<std::string>& names) {
    std::vector<vqabench::OptimizerKind> kinds;
    for (const auto& n : names) kinds.push_back(vqabench::parse_optimizer(n));
    return kinds;
}

std::vector<vqabench::ObjectiveKind> parse_objective_list(const std::vector<std::string>& names) {
    std::vector<vqabench::ObjectiveKind> kinds;
    for (const auto& n : names) kinds.push_back(vqabench::parse_objective(n));
    return kinds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal-stopping benchmarks for variational quantum circuit solvers"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write an ensemble of random instances");
    int gen_n = 8;
    int gen_count = 20;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--n", gen_n, "Number of binary variables")->required();
    gen->add_option("--count", gen_count, "Number of instances")->required();
    gen->add_option("--seed", gen_seed, "Master seed for the ensemble");
    gen->add_option("--out", gen_out, "Output ensemble file")->required();

    // run
    auto* run = app.add_subcommand("run", "Run the benchmark over an ensemble");
    vqabench::RunConfig run_flags;
    std::string run_config_path;
    std::vector<std::string> run_optimizers;
    std::vector<std::string> run_objectives;
    run->add_option("--config", run_config_path, "JSON config file (flags override it)");
    auto* run_ensemble = run->add_option("--ensemble", run_flags.ensemble_path, "Ensemble file");
    auto* run_out_opt = run->add_option("--out", run_flags.out_dir, "Output run directory");
    auto* run_depth = run->add_option("--depth", run_flags.depth, "Circuit depth D");
    auto* run_evals = run->add_option("--max-evals", run_flags.max_evals,
                                      "Circuit evaluations per restart");
    auto* run_restarts = run->add_option("--restarts", run_flags.restarts,
                                         "Random initializations per instance");
    auto* run_seed = run->add_option("--seed", run_flags.master_seed, "Master seed");
    auto* run_tol = run->add_option("--tol", run_flags.tol, "Optimizer tolerance");
    auto* run_workers = run->add_option("--workers", run_flags.workers,
                                        "Worker threads (default: processors)");
    auto* run_opt_list = run->add_option("--optimizers", run_optimizers,
                                         "nelder-mead and/or quasi-newton")
                             ->delimiter(',');
    auto* run_obj_list = run->add_option("--objectives", run_objectives,
                                         "mean-energy and/or optimal-cost-<c>")
                             ->delimiter(',');

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Reduce trace directories to figure CSVs");
    vqabench::AnalyzeConfig an_config;
    std::string an_out;
    analyze->add_option("--traces", an_config.trace_dirs,
                        "Run directory (repeat for multiple problem sizes)")
        ->required();
    analyze->add_option("--out", an_out, "Output directory for CSV files");
    analyze->add_option("--c", an_config.fig_c, "Cost per evaluation for the fig1 panels");
    analyze->add_option("--c-lo", an_config.c_lo, "Sweep grid lower bound");
    analyze->add_option("--c-hi", an_config.c_hi, "Sweep grid upper bound");
    analyze->add_option("--c-count", an_config.c_count, "Sweep grid point count");
    analyze->add_option("--scaling-c", an_config.scaling_c,
                        "c values for the size-scaling panels")
        ->delimiter(',');

    // plot
    auto* plot = app.add_subcommand("plot", "Render figure CSVs as SVG charts");
    std::vector<std::string> plot_inputs;
    std::string plot_out;
    bool plot_logx = false, plot_no_logx = false;
    bool plot_logy = false, plot_no_logy = false;
    plot->add_option("inputs", plot_inputs, "CSV files or an analysis directory")
        ->required();
    plot->add_option("--out", plot_out, "Output directory for SVG files");
    plot->add_flag("--logx", plot_logx, "Force a log x axis");
    plot->add_flag("--no-logx", plot_no_logx, "Force a linear x axis");
    plot->add_flag("--logy", plot_logy, "Force a log y axis");
    plot->add_flag("--no-logy", plot_no_logy, "Force a linear y axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            vqabench::cmd_generate(gen_n, gen_count, gen_seed, gen_out);
            std::printf("wrote %d instances (N=%d) to %s\n", gen_count, gen_n,
                        gen_out.c_str());
        } else if (run->parsed()) {
            // Precedence: flags > config file > defaults.
            vqabench::RunConfig run_config;
            if (!run_config_path.empty())
                run_config = vqabench::run_config_from_file(run_config_path, run_config);
            if (*run_ensemble) run_config.ensemble_path = run_flags.ensemble_path;
            if (*run_out_opt) run_config.out_dir = run_flags.out_dir;
            if (*run_depth) run_config.depth = run_flags.depth;
            if (*run_evals) run_config.max_evals = run_flags.max_evals;
            if (*run_restarts) run_config.restarts = run_flags.restarts;
            if (*run_seed) run_config.master_seed = run_flags.master_seed;
            if (*run_tol) run_config.tol = run_flags.tol;
            if (*run_workers) run_config.workers = run_flags.workers;
            if (*run_opt_list) run_config.optimizers = parse_optimizer_list(run_optimizers);
            if (*run_obj_list) run_config.objectives = parse_objective_list(run_objectives);
            if (run_config.out_dir.empty())
                run_config.out_dir = env_or("VQABENCH_OUT_DIR", "");
            const int executed = vqabench::cmd_run(run_config);
            std::printf("run complete: %d traces written to %s\n", executed,
                        run_config.out_dir.c_str());
        } else if (analyze->parsed()) {
            an_config.out_dir = !an_out.empty() ? an_out : env_or("VQABENCH_OUT_DIR", "");
            const auto files = vqabench::cmd_analyze(an_config);
            for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
        } else if (plot->parsed()) {
            if (plot_out.empty()) plot_out = env_or("VQABENCH_OUT_DIR", ".");
            std::optional<bool> lx, ly;
            if (plot_logx) lx = true;
            if (plot_no_logx) lx = false;
            if (plot_logy) ly = true;
            if (plot_no_logy) ly = false;
            const auto files = vqabench::cmd_plot(plot_inputs, plot_out, lx, ly);
            for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const vqabench::schema_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}

// trimlasso command-line front end.
//
//   trimlasso gen        --seeds 1 2 --n 100 --p 20 --out data/
//   trimlasso solve      --instance data/seed_1 --solver exact --lambda 0.5 --k 1
//   trimlasso path       --instance data/seed_1 --k 2 --eta 0.01
//   trimlasso gaps       --num-seeds 25 --grid-points 10 --out results/
//   trimlasso clcheck    --instance data/example1 --lambda 0.5 --ell 1
//   trimlasso export-mio --instance data/example1 --lambda 0.5 --k 1 --big-m 20
//
// Every subcommand also takes --config FILE, a JSON object whose keys are
// long option names; flags on the command line take precedence.
//
// Exit codes: 0 success, 2 usage error, 3 solver failure. Failures print
// {"error": {"kind": ..., "message": ...}} on stderr.

#include "trimlasso/experiments.hpp"
#include "trimlasso/io.hpp"
#include "trimlasso/mio.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <numeric>

namespace fs = std::filesystem;
using namespace trimlasso;

namespace {

constexpr int kUsageError = 2;
constexpr int kSolverFailure = 3;

int fail(int code, const std::string& kind, const std::string& message)
{
    nlohmann::json j;
    j["error"] = {{"kind", kind}, {"message", message}};
    std::cerr << j.dump() << "\n";
    return code;
}

// Appends "--key value..." for every config key not already given on the
// command line.
std::vector<std::string> merge_config(std::vector<std::string> args)
{
    std::string path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") path = args[i + 1];
    }
    if (path.empty()) return args;

    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("config " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw InvalidArgument("config " + path + " must hold a JSON object");

    const auto scalar = [](const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) return format_double(v.get<double>());
        return v.dump();
    };
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        std::string key = it.key();
        std::replace(key.begin(), key.end(), '_', '-');
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        if (it->is_boolean()) {
            if (it->get<bool>()) args.push_back(flag);
            continue;
        }
        args.push_back(flag);
        if (it->is_array()) {
            for (const auto& v : *it) args.push_back(scalar(v));
        } else {
            args.push_back(scalar(*it));
        }
    }
    return args;
}

void write_or_print(const std::string& out, const std::string& text)
{
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
        write_text(out, text);
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Trimmed Lasso sparse regression"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "trimlasso 1.0");

    ExperimentConfig cfg;
    std::string instance_dir;
    std::string solver = "exact";
    std::string out;
    double lambda = 0.0;
    double eta = 0.0;
    Index k = 0;
    Index ell = 0;
    int num_seeds = 0;
    bool strict = false;
    std::string config_path;

    const auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON file with default option values");
    };
    const auto add_instance_shape = [&](CLI::App* sub) {
        sub->add_option("--seeds", cfg.seeds, "Instance seeds");
        sub->add_option("--num-seeds", num_seeds, "Use seeds 1..N")->check(CLI::PositiveNumber);
        sub->add_option("--n", cfg.n, "Observations")->check(CLI::PositiveNumber);
        sub->add_option("--p", cfg.p, "Features")->check(CLI::PositiveNumber);
        sub->add_option("--snr", cfg.snr, "Signal-to-noise ratio (inf for noiseless)");
        sub->add_option("--corr", cfg.corr, "Feature correlation in [0, 1)");
    };
    const auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--lambda-grid", cfg.lambda_grid, "Ascending absolute lambda values");
        sub->add_option("--grid-points", cfg.grid_points, "Points of the default grid");
        sub->add_option("--grid-lo", cfg.grid_lo, "Smallest multiple of lambda_bar");
        sub->add_option("--grid-hi", cfg.grid_hi, "Largest multiple of lambda_bar");
        sub->add_option("--solvers", cfg.solvers, "Subset of altmin admm envelope exact");
    };

    auto* gen = app.add_subcommand("gen", "Generate synthetic instances");
    add_config(gen);
    add_instance_shape(gen);
    gen->add_option("--out", cfg.output_dir, "Output directory");

    auto* solve = app.add_subcommand("solve", "Solve one instance");
    add_config(solve);
    solve->add_option("--instance", instance_dir, "Directory with X.csv and y.csv")->required();
    solve->add_option("--solver", solver, "altmin, admm, envelope or exact")
        ->check(CLI::IsMember(kSolverNames));
    solve->add_option("--lambda", lambda, "Trimmed penalty weight")->required();
    solve->add_option("--eta", eta, "l1 weight");
    solve->add_option("--k", k, "Sparsity level")->required();
    solve->add_option("--budget", cfg.budget, "Max subsets for the exact solver");
    solve->add_option("--out", out, "Directory for solution.json and trace.csv");
    solve->add_flag("--strict", strict, "Exit 3 when a heuristic hits its iteration limit");

    auto* path = app.add_subcommand("path", "Coefficient profiles over a lambda grid");
    add_config(path);
    path->add_option("--instance", instance_dir, "Directory with X.csv and y.csv")->required();
    path->add_option("--k", k, "Sparsity level")->required();
    path->add_option("--eta", eta, "l1 weight");
    path->add_option("--budget", cfg.budget, "Max subsets for the exact solver");
    add_grid(path);
    path->add_option("--out", out, "Output CSV path (default stdout)");

    auto* gaps = app.add_subcommand("gaps", "Optimality gaps of the heuristics");
    add_config(gaps);
    add_instance_shape(gaps);
    gaps->add_option("--k", cfg.k, "Sparsity level");
    gaps->add_option("--eta", cfg.eta, "l1 weight");
    gaps->add_option("--budget", cfg.budget, "Max subsets for the exact solver");
    add_grid(gaps);
    gaps->add_option("--out", cfg.output_dir, "Directory for gaps.csv and summary.json");

    auto* clcheck = app.add_subcommand("clcheck", "Clipped-Lasso equivalence report");
    add_config(clcheck);
    clcheck->add_option("--instance", instance_dir, "Directory with X.csv and y.csv")->required();
    clcheck->add_option("--lambda", lambda, "Trimmed penalty weight")->required();
    clcheck->add_option("--eta", eta, "l1 weight");
    clcheck->add_option("--ell", ell, "Trimming level")->required();
    clcheck->add_option("--budget", cfg.budget, "Max subsets per k");
    clcheck->add_option("--out", out, "Output JSON path (default stdout)");

    auto* mio = app.add_subcommand("export-mio", "Write the big-M mixed-integer model");
    add_config(mio);
    mio->add_option("--instance", instance_dir, "Directory with X.csv and y.csv")->required();
    mio->add_option("--lambda", lambda, "Trimmed penalty weight")->required();
    mio->add_option("--eta", eta, "l1 weight");
    mio->add_option("--k", k, "Sparsity level")->required();
    mio->add_option("--big-m", cfg.big_m, "Big-M constant");
    mio->add_option("--out", out, "Output model path (default stdout)");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = merge_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(kUsageError, "usage", e.what());
    } catch (const std::exception& e) {
        return fail(kUsageError, "usage", e.what());
    }

    if (num_seeds > 0) {
        cfg.seeds.resize(static_cast<std::size_t>(num_seeds));
        std::iota(cfg.seeds.begin(), cfg.seeds.end(), std::uint64_t{1});
    }

    try {
        if (*gen) {
            for (const auto& dir : cmd_gen(cfg)) std::cout << dir.string() << "\n";
        } else if (*solve) {
            const ProblemInstance inst = read_instance(instance_dir);
            const TrimmedParams params{lambda, eta, k};
            params.validate(inst.p());
            const SolveReport report = cmd_solve(inst, params, solver, cfg.budget);
            const std::string json = solution_json(report);
            if (!out.empty()) {
                fs::create_directories(out);
                write_text(fs::path(out) / "solution.json", json);
                write_text(fs::path(out) / "trace.csv", trace_csv(report.solution));
            }
            std::cout << json;
            if (strict && report.solution.status == SolveStatus::IterationLimit) {
                return fail(kSolverFailure, "iteration_limit", solver + " stopped at its iteration limit");
            }
        } else if (*path) {
            const ProblemInstance inst = read_instance(instance_dir);
            cfg.validate();
            const std::vector<double> grid = lambda_values(cfg, inst);
            write_or_print(out, path_csv(cmd_path(inst, k, eta, grid, cfg.solvers, cfg.budget)));
        } else if (*gaps) {
            const GapsResult res = cmd_gaps(cfg);
            std::cout << gaps_summary_json(res.summary);
        } else if (*clcheck) {
            const ProblemInstance inst = read_instance(instance_dir);
            write_or_print(out, cmd_clcheck(inst, lambda, eta, ell, cfg.budget));
        } else if (*mio) {
            const ProblemInstance inst = read_instance(instance_dir);
            write_or_print(out, export_mio(inst, TrimmedParams{lambda, eta, k}, cfg.big_m));
        }
    } catch (const InvalidArgument& e) {
        return fail(kUsageError, "invalid_argument", e.what());
    } catch (const BudgetExceeded& e) {
        return fail(kSolverFailure, "budget_exceeded", e.what());
    } catch (const SolverError& e) {
        return fail(kSolverFailure, "solver_error", e.what());
    } catch (const std::exception& e) {
        return fail(kSolverFailure, "error", e.what());
    }
    return 0;
}

#pragma once

#include "trimlasso/exact.hpp"
#include "trimlasso/heuristics.hpp"
#include "trimlasso/model.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace trimlasso {

inline const std::vector<std::string> kSolverNames = {"altmin", "admm", "envelope", "exact"};

struct ExperimentConfig {
    std::vector<std::uint64_t> seeds = {1};
    Index n = 100;
    Index p = 20;
    Index k = 2;
    double snr = 10.0;
    double corr = 0.8;
    double eta = 0.01;
    // Absolute lambda values; when empty, grid_points multipliers of each
    // instance's lambda_bar, log-spaced over [grid_lo, grid_hi].
    std::vector<double> lambda_grid;
    int grid_points = 50;
    double grid_lo = 1e-3;
    double grid_hi = 10.0;
    std::vector<std::string> solvers = kSolverNames;
    std::filesystem::path output_dir = "out";
    double big_m = 20.0;
    std::uint64_t budget = 1000000;

    void validate() const;
};

/// points log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

/// The lambda values used for one instance under cfg.
std::vector<double> lambda_values(const ExperimentConfig& cfg, const ProblemInstance& inst);

ProblemInstance instance_for_seed(const ExperimentConfig& cfg, std::uint64_t seed);

/// Dispatch by solver name; start is ignored by the exact solver.
Solution run_solver(const std::string& solver, const ProblemInstance& inst, const TrimmedParams& params,
                    const Vector& start = Vector(), std::uint64_t budget = 1000000);

// ---------------------------------------------------------------------------

/// Writes <output_dir>/seed_<s>/{X.csv, y.csv, meta.json} per seed.
std::vector<std::filesystem::path> cmd_gen(const ExperimentConfig& cfg);

struct SolveReport {
    std::string solver;
    TrimmedParams params;
    Solution solution;
    double wall_seconds = 0.0;
};

SolveReport cmd_solve(const ProblemInstance& inst, const TrimmedParams& params, const std::string& solver,
                      std::uint64_t budget = 1000000);
std::string solution_json(const SolveReport& report);
std::string trace_csv(const Solution& solution);

struct PathRow {
    double lambda;
    std::string solver;
    Index coordinate;
    double coefficient;
    double objective;
    Index nnz;
};

/// Ascending grid; heuristics are warm-started from the previous lambda.
std::vector<PathRow> cmd_path(const ProblemInstance& inst, Index k, double eta, const std::vector<double>& grid,
                              const std::vector<std::string>& solvers, std::uint64_t budget = 1000000);
std::string path_csv(const std::vector<PathRow>& rows);

struct GapRow {
    std::uint64_t seed;
    std::size_t lambda_index;
    double lambda;
    std::string solver;
    double objective;
    double exact_objective;
    double gap;  // (f - f_exact) / f_exact
};

struct GapSummary {
    std::vector<std::string> solvers;
    std::size_t grid_size = 0;
    // solver -> per grid index geometric mean of (1 + gap), minus 1, in percent
    std::map<std::string, std::vector<double>> geomean_gap_percent;
    double min_gap = 0.0;
};

struct GapsResult {
    std::vector<GapRow> rows;  // ordered by seed, lambda index, solver
    GapSummary summary;
};

/// Every heuristic and the exact solver from zero on each (seed, lambda).
GapsResult run_gaps(const ExperimentConfig& cfg);
std::string gaps_csv(const std::vector<GapRow>& rows);
std::string gaps_summary_json(const GapSummary& summary);
/// run_gaps, then gaps.csv and summary.json in cfg.output_dir.
GapsResult cmd_gaps(const ExperimentConfig& cfg);

/// z-sequence, verdict, mu interval or the most violated triple, as JSON.
std::string cmd_clcheck(const ProblemInstance& inst, double lambda, double eta, Index ell,
                        std::uint64_t budget = 1000000);

}  // namespace trimlasso

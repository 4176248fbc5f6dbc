#include "trimlasso/experiments.hpp"

#include "trimlasso/io.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <sstream>

namespace trimlasso {

void ExperimentConfig::validate() const
{
    if (seeds.empty()) throw InvalidArgument("at least one seed is required");
    if (n < 1 || p < 1) throw InvalidArgument("n and p must be at least 1");
    if (k < 0 || k > p) throw InvalidArgument("k must lie in [0, p]");
    if (!(snr > 0.0)) throw InvalidArgument("snr must be positive");
    if (!(corr >= 0.0 && corr < 1.0)) throw InvalidArgument("corr must lie in [0, 1)");
    if (!(eta >= 0.0)) throw InvalidArgument("eta must be nonnegative");
    if (lambda_grid.empty()) {
        if (grid_points < 1) throw InvalidArgument("grid_points must be at least 1");
        if (!(grid_lo > 0.0) || !(grid_hi >= grid_lo)) throw InvalidArgument("need 0 < grid_lo <= grid_hi");
    }
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid[i] > 0.0)) throw InvalidArgument("lambda grid values must be positive");
        if (i > 0 && lambda_grid[i] < lambda_grid[i - 1]) throw InvalidArgument("lambda grid must be ascending");
    }
    if (solvers.empty()) throw InvalidArgument("at least one solver is required");
    for (const auto& s : solvers) {
        if (std::find(kSolverNames.begin(), kSolverNames.end(), s) == kSolverNames.end()) {
            throw InvalidArgument("unknown solver '" + s + "'");
        }
    }
    if (!(big_m > 0.0)) throw InvalidArgument("big M must be positive");
}

std::vector<double> log_grid(double lo, double hi, int points)
{
    if (points < 1) throw InvalidArgument("log_grid: points must be at least 1");
    if (!(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("log_grid: need 0 < lo <= hi");
    std::vector<double> g;
    if (points == 1) return {lo};
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < points; ++i) g.push_back(std::pow(10.0, a + (b - a) * i / (points - 1)));
    return g;
}

std::vector<double> lambda_values(const ExperimentConfig& cfg, const ProblemInstance& inst)
{
    if (!cfg.lambda_grid.empty()) return cfg.lambda_grid;
    const double lbar = lambda_bar(inst);
    std::vector<double> g = log_grid(cfg.grid_lo, cfg.grid_hi, cfg.grid_points);
    for (double& v : g) v *= lbar;
    return g;
}

ProblemInstance instance_for_seed(const ExperimentConfig& cfg, std::uint64_t seed)
{
    InstanceSpec spec;
    spec.seed = seed;
    spec.n = cfg.n;
    spec.p = cfg.p;
    spec.snr = cfg.snr;
    spec.corr = cfg.corr;
    return generate_instance(spec);
}

Solution run_solver(const std::string& solver, const ProblemInstance& inst, const TrimmedParams& params,
                    const Vector& start, std::uint64_t budget)
{
    if (solver == "altmin") {
        AltMinConfig c;
        c.start = start;
        return alt_min_solve(inst, params, c);
    }
    if (solver == "admm") {
        AdmmConfig c;
        c.start = start;
        c.record_residuals = true;
        return admm_solve(inst, params, c);
    }
    if (solver == "envelope") {
        EnvelopeConfig c;
        c.start = start;
        return envelope_solve(inst, params, c);
    }
    if (solver == "exact") {
        ExactOptions o;
        o.budget = budget;
        return exact_solve(inst, params, o);
    }
    throw InvalidArgument("unknown solver '" + solver + "'");
}

std::vector<std::filesystem::path> cmd_gen(const ExperimentConfig& cfg)
{
    cfg.validate();
    std::vector<std::filesystem::path> dirs;
    for (std::uint64_t seed : cfg.seeds) {
        const ProblemInstance inst = instance_for_seed(cfg, seed);
        InstanceMeta meta;
        meta.n = cfg.n;
        meta.p = cfg.p;
        meta.seed = seed;
        meta.snr = cfg.snr;
        meta.corr = cfg.corr;
        meta.beta_true = default_beta_true(cfg.p);
        const auto dir = cfg.output_dir / ("seed_" + std::to_string(seed));
        write_instance(dir, inst, meta);
        dirs.push_back(dir);
    }
    return dirs;
}

SolveReport cmd_solve(const ProblemInstance& inst, const TrimmedParams& params, const std::string& solver,
                      std::uint64_t budget)
{
    SolveReport r;
    r.solver = solver;
    r.params = params;
    const auto t0 = std::chrono::steady_clock::now();
    r.solution = run_solver(solver, inst, params, Vector(), budget);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string solution_json(const SolveReport& r)
{
    const Solution& s = r.solution;
    nlohmann::ordered_json j;
    j["solver"] = r.solver;
    j["lambda"] = r.params.lambda;
    j["eta"] = r.params.eta;
    j["k"] = r.params.k;
    j["beta"] = std::vector<double>(s.beta.data(), s.beta.data() + s.beta.size());
    j["objective"] = s.objective;
    j["status"] = to_string(s.status);
    j["iterations"] = s.iterations;
    j["nnz"] = count_nonzeros(s.beta);
    j["kkt_residual"] = s.kkt_residual;
    j["wall_seconds"] = r.wall_seconds;
    if (s.subsets_enumerated) j["certificate"] = {{"subsets_enumerated", *s.subsets_enumerated}};
    if (s.relaxed_objective) j["relaxed_objective"] = *s.relaxed_objective;
    return j.dump(2) + "\n";
}

std::string trace_csv(const Solution& s)
{
    std::ostringstream out;
    out << "# trimlasso trace v1\n";
    out << "iter,objective,primal_residual,dual_residual\n";
    for (std::size_t i = 0; i < s.trace.size(); ++i) {
        out << i << ',' << format_double(s.trace[i]) << ',';
        // Residuals start after the first iterate; trace[0] is the start point.
        if (i >= 1 && i - 1 < s.primal_residuals.size()) out << format_double(s.primal_residuals[i - 1]);
        out << ',';
        if (i >= 1 && i - 1 < s.dual_residuals.size()) out << format_double(s.dual_residuals[i - 1]);
        out << '\n';
    }
    return out.str();
}

std::vector<PathRow> cmd_path(const ProblemInstance& inst, Index k, double eta, const std::vector<double>& grid,
                              const std::vector<std::string>& solvers, std::uint64_t budget)
{
    if (grid.empty()) throw InvalidArgument("lambda grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] < grid[i - 1]) throw InvalidArgument("lambda grid must be ascending");
    }
    std::vector<PathRow> rows;
    std::map<std::string, Vector> warm;
    for (double lambda : grid) {
        const TrimmedParams params{lambda, eta, k};
        params.validate(inst.p());
        for (const auto& solver : solvers) {
            const Solution s = run_solver(solver, inst, params, warm[solver], budget);
            if (solver != "exact") warm[solver] = s.beta;
            const Index nnz = count_nonzeros(s.beta);
            for (Index i = 0; i < inst.p(); ++i) rows.push_back({lambda, solver, i, s.beta(i), s.objective, nnz});
        }
    }
    return rows;
}

std::string path_csv(const std::vector<PathRow>& rows)
{
    std::ostringstream out;
    out << "# trimlasso path v1\n";
    out << "lambda,solver,coordinate,coefficient,objective,nnz\n";
    for (const auto& r : rows) {
        out << format_double(r.lambda) << ',' << r.solver << ',' << r.coordinate << ',' << format_double(r.coefficient)
            << ',' << format_double(r.objective) << ',' << r.nnz << '\n';
    }
    return out.str();
}

GapsResult run_gaps(const ExperimentConfig& cfg)
{
    cfg.validate();
    GapsResult res;
    std::vector<std::string> solvers = cfg.solvers;
    if (std::find(solvers.begin(), solvers.end(), "exact") == solvers.end()) solvers.push_back("exact");
    res.summary.solvers = solvers;

    std::map<std::string, std::vector<double>> log_sum;
    std::size_t grid_size = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::uint64_t seed : cfg.seeds) {
        const ProblemInstance inst = instance_for_seed(cfg, seed);
        const std::vector<double> lambdas = lambda_values(cfg, inst);
        grid_size = lambdas.size();
        for (std::size_t li = 0; li < lambdas.size(); ++li) {
            const TrimmedParams params{lambdas[li], cfg.eta, cfg.k};
            ExactOptions eo;
            eo.budget = cfg.budget;
            const double f_exact = exact_solve(inst, params, eo).objective;
            for (const auto& solver : solvers) {
                const double f = solver == "exact" ? f_exact : run_solver(solver, inst, params).objective;
                const double gap = f_exact > 0.0 ? (f - f_exact) / f_exact : f - f_exact;
                res.rows.push_back({seed, li, lambdas[li], solver, f, f_exact, gap});
                auto& acc = log_sum[solver];
                acc.resize(lambdas.size(), 0.0);
                acc[li] += std::log1p(gap);
                min_gap = std::min(min_gap, gap);
            }
        }
    }
    res.summary.grid_size = grid_size;
    res.summary.min_gap = min_gap;
    const double count = static_cast<double>(cfg.seeds.size());
    for (const auto& solver : solvers) {
        std::vector<double> g;
        for (double s : log_sum[solver]) g.push_back(100.0 * std::expm1(s / count));
        res.summary.geomean_gap_percent[solver] = std::move(g);
    }
    return res;
}

std::string gaps_csv(const std::vector<GapRow>& rows)
{
    std::ostringstream out;
    out << "# trimlasso gaps v1\n";
    out << "seed,lambda_index,lambda,solver,objective,exact_objective,gap\n";
    for (const auto& r : rows) {
        out << r.seed << ',' << r.lambda_index << ',' << format_double(r.lambda) << ',' << r.solver << ','
            << format_double(r.objective) << ',' << format_double(r.exact_objective) << ',' << format_double(r.gap)
            << '\n';
    }
    return out.str();
}

std::string gaps_summary_json(const GapSummary& s)
{
    nlohmann::ordered_json j;
    j["solvers"] = s.solvers;
    j["grid_size"] = s.grid_size;
    j["geomean_gap_percent"] = nlohmann::ordered_json::object();
    for (const auto& solver : s.solvers) j["geomean_gap_percent"][solver] = s.geomean_gap_percent.at(solver);
    j["min_gap"] = s.min_gap;
    return j.dump(2) + "\n";
}

GapsResult cmd_gaps(const ExperimentConfig& cfg)
{
    GapsResult res = run_gaps(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    write_text(cfg.output_dir / "gaps.csv", gaps_csv(res.rows));
    write_text(cfg.output_dir / "summary.json", gaps_summary_json(res.summary));
    return res;
}

std::string cmd_clcheck(const ProblemInstance& inst, double lambda, double eta, Index ell, std::uint64_t budget)
{
    if (ell < 0 || ell > inst.p()) throw InvalidArgument("ell must lie in [0, p]");
    ExactOptions eo;
    eo.budget = budget;
    const ZSequence z = z_sequence(inst, lambda, eta, eo);
    const Vector& beta_star = z.argmins[static_cast<std::size_t>(ell)];
    const ClEquivalenceResult r = clipped_equivalence_check(z, ell, beta_star);

    nlohmann::ordered_json j;
    j["lambda"] = lambda;
    j["eta"] = eta;
    j["ell"] = ell;
    j["z"] = z.values;
    std::vector<Index> nnz;
    for (const auto& b : z.argmins) nnz.push_back(count_nonzeros(b));
    j["nnz"] = nnz;
    j["ell_e"] = r.ell_e;
    j["verdict"] = to_string(r.verdict);
    j["equivalent"] = r.equivalent;
    if (r.equivalent) {
        j["mu_interval"] = {r.mu_lower, std::isinf(r.mu_upper) ? nlohmann::ordered_json(nullptr)
                                                               : nlohmann::ordered_json(r.mu_upper)};
    }
    if (r.worst_triple) {
        j["worst_triple"] = *r.worst_triple;
        j["worst_margin"] = r.worst_margin;
    }
    return j.dump(2) + "\n";
}

}  // namespace trimlasso

// Command-line front end: solve, run baselines and sweeps, report latencies, check convexity.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "edgealloc/baselines.hpp"
#include "edgealloc/harness.hpp"

using namespace edgealloc;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kValidation = 1, kSolver = 2, kIo = 3 };

struct Common {
    std::string config;
    std::string out = "out";
    std::uint64_t seed = 1;
    std::optional<int> max_iters;
    std::optional<double> rho, beta;
    std::optional<std::string> dual_sign;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "Scenario file")->required()->check(CLI::ExistingFile);
    app->add_option("--out", c.out, "Output directory")->capture_default_str();
    app->add_option("--seed", c.seed, "Seed for randomized baselines")->capture_default_str();
    app->add_option("--max-iters", c.max_iters, "Iteration cap K")->check(CLI::PositiveNumber);
    app->add_option("--rho", c.rho, "Penalty rho")->check(CLI::PositiveNumber);
    app->add_option("--beta", c.beta, "Penalty beta")->check(CLI::PositiveNumber);
    app->add_option("--dual-sign", c.dual_sign, "Multiplier update sign")->check(CLI::IsMember({"paper", "standard"}));
}

ExperimentSpec base_spec(const Common& c, const std::string& id) {
    ScenarioFile file = load_scenario_file(c.config);
    ExperimentSpec spec;
    spec.id = id;
    spec.scenario = file.scenario;
    spec.mg = file.mg;
    spec.mc = file.mc;
    spec.pinned_alpha_bcfl = file.pinned_alpha_bcfl;
    spec.pinned_f_bcfl_fraction = file.pinned_f_bcfl_fraction;
    spec.seed = c.seed;
    if (c.max_iters) spec.mg.max_iters = spec.mc.max_iters = *c.max_iters;
    if (c.rho) spec.mg.rho = spec.mc.rho = *c.rho;
    if (c.beta) spec.mg.beta = spec.mc.beta = *c.beta;
    if (c.dual_sign) spec.mg.dual_sign = spec.mc.dual_sign = parse_dual_sign(*c.dual_sign);
    return spec;
}

void print_rows(const ExperimentResult& r) {
    std::printf("%-10s %-10s %4s %6s %5s %12s %s\n", "solver", "sweep", "rep", "iters", "conv", "cost", "status");
    for (const auto& row : r.rows) {
        std::printf("%-10s %-10s %4d %6d %5s %12.6g %s\n", row.solver.c_str(),
                    row.sweep_parameter == "none" ? "-" : format_double(row.sweep_value).c_str(), row.repetition,
                    row.iterations_used, row.converged ? "yes" : "no", row.final_cost,
                    row.status == "ok" ? "ok" : ("failed: " + row.error).c_str());
    }
}

/// Input problems that would otherwise only surface as failed rows.
void precheck(const ExperimentSpec& spec) {
    const Scenario& s = std::get<Scenario>(spec.scenario);
    const bool equal_split = spec.solver == SolverKind::mg || spec.solver == SolverKind::gadmm;
    if (equal_split && !s.homogeneous())
        throw ValidationError(std::string(to_string(spec.solver)) + " needs identical devices; use solve-mc or cadmm");
    spec.validate();
}

int write_outputs(const ExperimentResult& r, const std::string& dir, const std::string& stem) {
    fs::path base(dir);
    emit_results(r.rows, base / (stem + ".csv"));
    emit_traces(r, base / (stem + ".trace.jsonl"));
    std::printf("wrote %s and %s\n", (base / (stem + ".csv")).string().c_str(),
                (base / (stem + ".trace.jsonl")).string().c_str());
    for (const auto& row : r.rows)
        if (row.status != "ok") return kSolver;
    return kOk;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("--values: '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw ValidationError("--values is empty");
    return out;
}

Shape parse_shape(const std::string& s) { return s == "heterogeneous" ? Shape::heterogeneous : Shape::homogeneous; }

int check_convexity(const Common& c, int samples, double step) {
    Scenario s = load_scenario(c.config);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const double F = s.server.cpu_max;
    const int n = s.size();
    double worst = std::numeric_limits<double>::infinity();
    int pd = 0;
    for (int k = 0; k < samples; ++k) {
        std::vector<double> wa(n + 1), wf(n + 1);
        double sa = 0, sf = 0;
        for (int i = 0; i <= n; ++i) {
            sa += wa[i] = u(rng);
            sf += wf[i] = u(rng);
        }
        HeterogeneousAllocation a;
        for (int i = 0; i < n; ++i) {
            a.alpha.push_back(0.9 * wa[i] / sa);
            a.f.push_back(0.9 * F * wf[i] / sf);
        }
        a.alpha_bcfl = 0.9 * wa[n] / sa;
        a.f_bcfl = 0.9 * F * wf[n] / sf;
        auto rep = numeric_hessian_check(s, a, step);
        worst = std::min(worst, rep.min_eigenvalue);
        pd += rep.positive_definite;
    }
    std::printf("positive definite at %d/%d random interior allocations; smallest eigenvalue %.6g\n", pd, samples,
                worst);
    return pd == samples ? kOk : kSolver;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-minimizing bandwidth/CPU allocation for MEC and BCFL tasks"};
    app.require_subcommand(1);

    Common c_mg, c_mc, c_base, c_sweep, c_lat, c_cvx;
    auto* mg = app.add_subcommand("solve-mg", "Equal-split ADMM solve on identical devices");
    add_common(mg, c_mg);
    auto* mc = app.add_subcommand("solve-mc", "Per-device consensus ADMM solve");
    add_common(mc, c_mc);

    auto* base = app.add_subcommand("baseline", "Run a comparison strategy");
    add_common(base, c_base);
    std::string kind = "random", shape = "homogeneous";
    int iterations = 100;
    std::optional<int> reps;
    base->add_option("--kind", kind)->check(CLI::IsMember({"random", "fixed", "gadmm", "cadmm"}))->capture_default_str();
    base->add_option("--shape", shape)->check(CLI::IsMember({"homogeneous", "heterogeneous"}))->capture_default_str();
    base->add_option("--iterations", iterations)->check(CLI::PositiveNumber)->capture_default_str();
    base->add_option("--reps", reps, "Repetitions (default 10 for random, 1 otherwise)")->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter");
    add_common(sweep, c_sweep);
    std::string sweep_solver = "mg", param, values, sweep_shape = "homogeneous";
    int sweep_reps = 1, sweep_iters = 100;
    sweep->add_option("--solver", sweep_solver)
        ->check(CLI::IsMember({"mg", "mc", "random", "fixed", "gadmm", "cadmm"}))
        ->capture_default_str();
    sweep->add_option("--param", param, "rho, beta, psi, psi_prim, psi_dual, N, D_scale, D_bcfl_scale, D_i, D_bcfl")
        ->required();
    sweep->add_option("--values", values, "Comma-separated values")->required();
    sweep->add_option("--reps", sweep_reps)->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--shape", sweep_shape)->check(CLI::IsMember({"homogeneous", "heterogeneous"}));
    sweep->add_option("--iterations", sweep_iters, "Baseline iterations")->check(CLI::PositiveNumber);

    auto* lat = app.add_subcommand("latency", "Solve, then report per-task latency");
    add_common(lat, c_lat);
    std::string lat_solver = "mg";
    lat->add_option("--solver", lat_solver)->check(CLI::IsMember({"mg", "mc"}))->capture_default_str();

    auto* cvx = app.add_subcommand("check-convexity", "Numeric Hessian test at random interior allocations");
    add_common(cvx, c_cvx);
    int samples = 100;
    double step = 1e-4;
    cvx->add_option("--samples", samples)->check(CLI::PositiveNumber)->capture_default_str();
    cvx->add_option("--step", step)->check(CLI::PositiveNumber)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*mg || *mc) {
            const bool is_mg = bool(*mg);
            const Common& c = is_mg ? c_mg : c_mc;
            ExperimentSpec spec = base_spec(c, is_mg ? "solve-mg" : "solve-mc");
            spec.solver = is_mg ? SolverKind::mg : SolverKind::mc;
            precheck(spec);
            auto r = run_experiment(spec);
            print_rows(r);
            return write_outputs(r, c.out, spec.id);
        }
        if (*base) {
            ExperimentSpec spec = base_spec(c_base, "baseline-" + kind);
            spec.solver = parse_solver_kind(kind);
            spec.shape = kind == "cadmm" ? Shape::heterogeneous : kind == "gadmm" ? Shape::homogeneous : parse_shape(shape);
            spec.baseline_iterations = iterations;
            spec.repetitions = reps ? *reps : (kind == "random" ? 10 : 1);
            precheck(spec);
            auto r = run_experiment(spec);
            print_rows(r);
            return write_outputs(r, c_base.out, spec.id);
        }
        if (*sweep) {
            ExperimentSpec spec = base_spec(c_sweep, "sweep-" + sweep_solver + "-" + param);
            spec.solver = parse_solver_kind(sweep_solver);
            spec.shape = spec.solver == SolverKind::mc || spec.solver == SolverKind::cadmm ? Shape::heterogeneous
                                                                                           : parse_shape(sweep_shape);
            spec.sweep = SweepAxis{param, parse_values(values)};
            spec.repetitions = sweep_reps;
            spec.baseline_iterations = sweep_iters;
            precheck(spec);
            auto r = run_experiment(spec);
            print_rows(r);
            return write_outputs(r, c_sweep.out, spec.id);
        }
        if (*lat) {
            ExperimentSpec spec = base_spec(c_lat, "latency-" + lat_solver);
            spec.solver = parse_solver_kind(lat_solver);
            precheck(spec);
            auto r = run_experiment(spec);
            if (r.rows.front().status != "ok") throw SolverError(r.rows.front().error);
            const Scenario& s = std::get<Scenario>(spec.scenario);
            auto rows = latency_report(s, r.allocations.front());
            std::printf("%-9s %12s %12s %12s %10s %12s\n", "task", "t_comm", "t_comp", "total", "budget", "slack");
            for (const auto& l : rows)
                std::printf("%-9s %12.6g %12.6g %12.6g %10.4g %12.6g\n", l.task.c_str(), l.t_comm, l.t_comp, l.total,
                            l.budget, l.slack);
            fs::path out = fs::path(c_lat.out) / (spec.id + ".csv");
            emit_latency(rows, out);
            std::printf("wrote %s\n", out.string().c_str());
            return kOk;
        }
        if (*cvx) return check_convexity(c_cvx, samples, step);
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kSolver;
    }
    return kOk;
}

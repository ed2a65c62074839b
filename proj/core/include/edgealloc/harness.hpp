#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "edgealloc/baselines.hpp"
#include "edgealloc/model.hpp"
#include "edgealloc/solver_mc.hpp"
#include "edgealloc/solver_mg.hpp"

namespace edgealloc {

/// Everything a scenario file can bind: the scenario plus solver settings from [solver].
struct ScenarioFile {
    Scenario scenario;
    MgConfig mg;
    McConfig mc;
    double pinned_alpha_bcfl = 0.3;
    double pinned_f_bcfl_fraction = 0.3;
};

/// Parses the INI-style scenario format. `origin` names the source in diagnostics.
/// Throws ParseError on syntax, unknown or missing fields, ValidationError on invariants
/// (InfeasibleScenario for C5).
ScenarioFile parse_scenario_text(const std::string& text, const std::string& origin = "<input>");
ScenarioFile load_scenario_file(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

enum class SolverKind { mg, mc, random, fixed, gadmm, cadmm };

const char* to_string(SolverKind k);
SolverKind parse_solver_kind(const std::string& s);

/// A parameter and the values it takes across sweep cells.
/// Parameters: rho, beta, psi, psi_prim, psi_dual, N, D_scale, D_bcfl_scale, D_i, D_bcfl.
struct SweepAxis {
    std::string parameter;
    std::vector<double> values;
};

struct ExperimentSpec {
    std::string id = "experiment";
    std::variant<Scenario, std::filesystem::path> scenario;
    SolverKind solver = SolverKind::mg;
    Shape shape = Shape::homogeneous;  ///< random and fixed baselines only
    MgConfig mg;
    McConfig mc;
    double pinned_alpha_bcfl = 0.3;
    double pinned_f_bcfl_fraction = 0.3;
    int baseline_iterations = 100;
    std::optional<SweepAxis> sweep;
    int repetitions = 1;
    std::uint64_t seed = 1;

    void validate() const;
};

struct ResultRow {
    std::string experiment_id;
    std::string sweep_parameter;  ///< "none" without a sweep
    double sweep_value = 0.0;
    int repetition = 0;
    std::uint64_t seed = 0;
    std::string solver;
    std::string status;  ///< "ok" or "failed"
    std::string error;
    int iterations_used = 0;
    bool converged = false;
    double final_cost = 0.0;
    double alpha_bcfl = 0.0;
    double f_bcfl = 0.0;
    std::vector<double> alpha;  ///< per device
    std::vector<double> f;
    std::vector<double> device_latency;
    double bcfl_latency = 0.0;

    bool operator==(const ResultRow&) const = default;
};

/// Column names of the CSV output, in order.
const std::vector<std::string>& result_columns();

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<SolverTrace> traces;  ///< one per row, empty for failed rows
    std::vector<Allocation> allocations;
};

/// Applies one sweep value to a scenario and solver settings.
void apply_sweep(const std::string& parameter, double value, Scenario& scenario, MgConfig& mg, McConfig& mc);

/// Runs every sweep value × repetition in order. Repetition r uses seed + r. Solver errors mark
/// the row failed and the run continues.
ExperimentResult run_experiment(const ExperimentSpec& spec);

enum class OutputFormat { csv, trace };

/// Writes the rows as CSV. Throws ValidationError for empty rows (nothing is created) and IoError on
/// write failure.
void emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

/// One JSON object per line and per iteration, tagged with the row it belongs to.
void emit_traces(const ExperimentResult& result, const std::filesystem::path& path);

std::vector<ResultRow> parse_results_csv(const std::string& text);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

struct LatencyRow {
    std::string task;
    double t_comm = 0.0;
    double t_comp = 0.0;
    double total = 0.0;
    double budget = 0.0;
    double slack = 0.0;
};

/// One row per device then one BCFL row. Throws InfeasibleAllocation when the allocation
/// leaves the box or violates the budgets C3–C4 by more than 1e-3.
std::vector<LatencyRow> latency_report(const Scenario& scenario, const Allocation& alloc);

void emit_latency(const std::vector<LatencyRow>& rows, const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace edgealloc

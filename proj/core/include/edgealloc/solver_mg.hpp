#pragma once

#include <array>

#include "edgealloc/model.hpp"
#include "edgealloc/trace.hpp"

namespace edgealloc {

struct MgConfig {
    double rho = 0.5;
    double beta = 0.5;
    double psi = 1e-3;
    int max_iters = 1000;
    double multiplier_init = 1.0;
    DualSign dual_sign = DualSign::standard;
    double inner_tolerance = 1e-8;

    void validate() const;
};

/// Iterate of the equal-split solver. Frequencies in raw units.
struct MgState {
    double alpha_star = 0.0;
    double alpha_bcfl = 0.0;
    double f_star = 0.0;
    double f_bcfl = 0.0;
    std::array<double, 5> lambda{};  ///< C1 BCFL time, C2 device time, C3 bandwidth, C4 CPU, C5 storage
    int k = 0;
};

/// Constraint functions g_m (≤ 0 when satisfied). The CPU budget g4 is expressed as a fraction of F.
std::array<double, 5> mg_constraints(const MgState& state, const Scenario& scenario);

/// Equal-split objective U′ of the current iterate.
double mg_objective(const MgState& state, const Scenario& scenario);

/// U′ + Σ_m [λ_m·r_m + (ρ/2)·r_m²] with r_m = max(g_m, −λ_m/ρ).
double mg_lagrangian(const MgState& state, const Scenario& scenario, const MgConfig& config);

/// Feasible interior starting point with all multipliers at config.multiplier_init.
MgState mg_initial_state(const Scenario& scenario, const MgConfig& config);

/// One sweep: α_star, then α_bcfl, f_star, f_bcfl with proximal terms, then the multipliers.
MgState mg_step(const MgState& state, const Scenario& scenario, const MgConfig& config);

/// Stopping quantities between two iterates: squared differences of α_star, f_star, α_bcfl, f_bcfl,
/// then the positive parts of g1..g4 at `next`.
std::array<double, 8> mg_stop_residuals(const MgState& prev, const MgState& next, const Scenario& scenario);

struct MgResult {
    HomogeneousAllocation allocation;
    SolverTrace trace;
    MgState state;
};

/// Requires identical devices (throws ValidationError otherwise) and C5 (throws InfeasibleScenario).
MgResult solve_mg(const Scenario& scenario, const MgConfig& config = {});

/// Variant with α_bcfl and f_bcfl held fixed and no proximal terms, used by the pinned baseline.
MgResult solve_mg_pinned(const Scenario& scenario, const MgConfig& config, double alpha_bcfl, double f_bcfl,
                         int iterations);

}  // namespace edgealloc

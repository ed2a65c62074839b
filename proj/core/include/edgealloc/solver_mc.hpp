#pragma once

#include <array>
#include <optional>

#include "edgealloc/model.hpp"
#include "edgealloc/trace.hpp"

namespace edgealloc {

struct McConfig {
    double rho = 0.5;
    double beta = 1.0;
    double psi = 1e-3;       ///< BCFL successive differences and constraint residuals
    double psi_prim = 1e-3;  ///< local/global disagreement
    double psi_dual = 1e-3;  ///< successive change of the global variables
    int max_iters = 1000;
    double multiplier_init = 1.0;
    DualSign dual_sign = DualSign::standard;
    double inner_tolerance = 1e-8;

    void validate() const;
};

/// Iterate of the per-device consensus solver. Frequencies in raw units; the consensus
/// multipliers ε_i price the frequency disagreement measured as a fraction of F.
struct McState {
    std::vector<double> alpha, f;
    double alpha_bcfl = 0.0;
    double f_bcfl = 0.0;
    double alpha_hat = 0.0;
    double f_hat = 0.0;
    std::vector<double> theta, epsilon;
    double eta1 = 0.0;  ///< BCFL time constraint
    double eta2 = 0.0;  ///< storage constraint
    double nu_bandwidth = 0.0;  ///< resource prices that cleared the budgets in the last step
    double nu_cpu = 0.0;
    int k = 0;
};

/// U + Σθ_i(α_i−α̂) + Σε_i(φ_i−φ̂) + η₁r₁ + η₂r₅ + (ρ/2)Σ[(α_i−α̂)² + (φ_i−φ̂)²] + (ρ/2)r₁² + r₅²,
/// φ = f/F and r = max(g, −η/ρ).
double mc_lagrangian(const McState& state, const Scenario& scenario, const McConfig& config);

/// α_i = φ_i = D_i/(2ΣD), α_bcfl = φ_bcfl = 1/4, globals at the device means, multipliers at init.
McState mc_initial_state(const Scenario& scenario, const McConfig& config);

/// BCFL variables held fixed (pinned baseline). Absent means they are optimized.
struct McPin {
    double alpha_bcfl;
    double f_bcfl;
};

/// One iteration: the budget-coupled local phase (devices read only iteration-k state),
/// then the global variables, then the multipliers.
McState mc_step(const McState& state, const Scenario& scenario, const McConfig& config,
                const std::optional<McPin>& pin = std::nullopt);

/// prim, dual, bcfl, then positive parts of the C1..C4 residuals at `next`.
std::array<double, 7> mc_stop_residuals(const McState& prev, const McState& next, const Scenario& scenario);

struct McResult {
    HeterogeneousAllocation allocation;
    SolverTrace trace;
    McState state;
};

McResult solve_mc(const Scenario& scenario, const McConfig& config = {});

McResult solve_mc_pinned(const Scenario& scenario, const McConfig& config, double alpha_bcfl, double f_bcfl,
                         int iterations);

}  // namespace edgealloc

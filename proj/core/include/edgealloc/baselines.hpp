#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "edgealloc/model.hpp"
#include "edgealloc/solver_mc.hpp"
#include "edgealloc/solver_mg.hpp"
#include "edgealloc/trace.hpp"

namespace edgealloc {

/// Fresh seeded draws every iteration, renormalized onto the budgets.
struct RandomBaseline {};

/// A constant allocation. Absent means the solver's equal-split starting point.
struct FixedBaseline {
    std::optional<Allocation> allocation;
};

/// Equal-split ADMM with the BCFL variables frozen.
struct GAdmmPinned {
    double alpha_bcfl = 0.3;
    double f_bcfl_fraction = 0.3;  ///< f_bcfl = fraction·F
};

/// Consensus ADMM with the BCFL variables frozen.
struct CAdmmPinned {
    double alpha_bcfl = 0.3;
    double f_bcfl_fraction = 0.3;
};

using BaselineKind = std::variant<RandomBaseline, FixedBaseline, GAdmmPinned, CAdmmPinned>;

enum class Shape { homogeneous, heterogeneous };

/// Share of each budget handed out by the random baseline.
inline constexpr double kRandomBudgetShare = 0.95;

struct BaselineOptions {
    Shape shape = Shape::homogeneous;  ///< used by Random and by the default Fixed allocation
    MgConfig mg;
    McConfig mc;
    std::uint64_t seed = 1;
    int iterations = 100;
};

struct BaselineResult {
    SolverTrace trace;
    Allocation allocation;  ///< the last allocation of the trace
    double cost = 0.0;      ///< total_cost of `allocation`
};

const char* baseline_name(const BaselineKind& kind);
BaselineKind parse_baseline(const std::string& name);

/// Random and Fixed traces always have `iterations` records; the pinned solvers stop early on convergence.
/// Throws InfeasibleAllocation for a Fixed allocation outside the box or the budgets.
BaselineResult run_baseline(const BaselineKind& kind, const Scenario& scenario, const BaselineOptions& options);

/// Equal-split starting point of the solver for the requested shape.
Allocation fixed_default_allocation(const Scenario& scenario, Shape shape);

}  // namespace edgealloc

#pragma once

#include <string>
#include <vector>

namespace edgealloc {

/// How the inequality multipliers move after each primal sweep.
enum class DualSign {
    standard,  ///< λ ← max(0, λ + ρ·r), ordinary dual ascent
    paper,     ///< λ ← max(0, λ − β·r), diverges when a constraint is slack
};

DualSign parse_dual_sign(const std::string& s);
const char* to_string(DualSign s);

/// One iteration of a solver or baseline. Frequencies are in raw units.
struct IterationRecord {
    int k = 0;
    std::vector<double> alpha;  ///< one entry for homogeneous runs
    std::vector<double> f;
    double alpha_bcfl = 0.0;
    double f_bcfl = 0.0;
    std::vector<double> multipliers;
    double objective = 0.0;
    std::vector<double> residuals;  ///< stopping quantities, compared against SolverTrace::thresholds
};

struct SolverTrace {
    std::vector<std::string> multiplier_names;
    std::vector<std::string> residual_names;
    std::vector<double> thresholds;
    std::vector<IterationRecord> records;
    bool converged = false;
    int iterations_used = 0;

    /// True when every residual of the last record is within its threshold.
    bool final_residuals_within() const;
};

}  // namespace edgealloc

#include "edgealloc/trace.hpp"

#include "edgealloc/errors.hpp"

namespace edgealloc {

DualSign parse_dual_sign(const std::string& s) {
    if (s == "standard") return DualSign::standard;
    if (s == "paper") return DualSign::paper;
    throw ValidationError("dual_sign must be 'standard' or 'paper', got '" + s + "'");
}

const char* to_string(DualSign s) { return s == DualSign::standard ? "standard" : "paper"; }

bool SolverTrace::final_residuals_within() const {
    if (records.empty()) return false;
    const auto& r = records.back().residuals;
    for (std::size_t i = 0; i < r.size() && i < thresholds.size(); ++i)
        if (!(r[i] <= thresholds[i])) return false;
    return true;
}

}  // namespace edgealloc

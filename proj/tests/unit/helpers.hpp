#pragma once

#include <cstring>
#include <random>

#include "edgealloc/model.hpp"
#include "edgealloc/trace.hpp"

namespace testutil {

/// Random allocation strictly inside the box using at most `share` of each budget.
inline edgealloc::HeterogeneousAllocation random_interior(const edgealloc::Scenario& s, std::mt19937_64& rng,
                                                          double share = 0.9) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const int n = s.size();
    std::vector<double> wa(n + 1), wf(n + 1);
    double sa = 0, sf = 0;
    for (int i = 0; i <= n; ++i) {
        sa += wa[i] = u(rng);
        sf += wf[i] = u(rng);
    }
    edgealloc::HeterogeneousAllocation a;
    for (int i = 0; i < n; ++i) {
        a.alpha.push_back(share * wa[i] / sa);
        a.f.push_back(share * s.server.cpu_max * wf[i] / sf);
    }
    a.alpha_bcfl = share * wa[n] / sa;
    a.f_bcfl = share * s.server.cpu_max * wf[n] / sf;
    return a;
}

inline bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

inline bool identical(const edgealloc::SolverTrace& a, const edgealloc::SolverTrace& b) {
    if (a.records.size() != b.records.size() || a.converged != b.converged) return false;
    auto eqv = [](const std::vector<double>& x, const std::vector<double>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!same_bits(x[i], y[i])) return false;
        return true;
    };
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        const auto &p = a.records[k], &q = b.records[k];
        if (p.k != q.k || !eqv(p.alpha, q.alpha) || !eqv(p.f, q.f) || !same_bits(p.alpha_bcfl, q.alpha_bcfl) ||
            !same_bits(p.f_bcfl, q.f_bcfl) || !eqv(p.multipliers, q.multipliers) ||
            !same_bits(p.objective, q.objective) || !eqv(p.residuals, q.residuals))
            return false;
    }
    return true;
}

}  // namespace testutil

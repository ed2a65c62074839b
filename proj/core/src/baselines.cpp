#include "edgealloc/baselines.hpp"

#include <random>

namespace edgealloc {

namespace {

SolverTrace static_trace() {
    SolverTrace t;
    t.residual_names = {"c3", "c4"};
    t.thresholds = {0.0, 0.0};
    return t;
}

IterationRecord record_of(int k, const Allocation& alloc, const Scenario& s) {
    const auto het = expand(alloc, s.size());
    IterationRecord r;
    r.k = k;
    if (const auto* h = std::get_if<HomogeneousAllocation>(&alloc)) {
        r.alpha = {h->alpha_star};
        r.f = {h->f_star};
    } else {
        r.alpha = het.alpha;
        r.f = het.f;
    }
    r.alpha_bcfl = het.alpha_bcfl;
    r.f_bcfl = het.f_bcfl;
    r.objective = total_cost(s, alloc);
    auto rep = check_feasibility(s, alloc);
    r.residuals = {std::max(-rep.c3, 0.0), std::max(-rep.c4, 0.0)};
    return r;
}

/// Uniform draw on the open interval (0,1).
double open_uniform(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double x;
    do {
        x = u(rng);
    } while (x <= 0.0);
    return x;
}

Allocation random_allocation(const Scenario& s, Shape shape, std::mt19937_64& rng) {
    const int n = s.size();
    const double F = s.server.cpu_max;
    if (shape == Shape::homogeneous) {
        double ub = open_uniform(rng), ud = open_uniform(rng);
        double vb = open_uniform(rng), vd = open_uniform(rng);
        double wa = kRandomBudgetShare / (ub + n * ud);
        double wf = kRandomBudgetShare / (vb + n * vd);
        return HomogeneousAllocation{ud * wa, vd * wf * F, ub * wa, vb * wf * F};
    }
    std::vector<double> ua(n), uf(n);
    for (auto& x : ua) x = open_uniform(rng);
    double ub = open_uniform(rng);
    for (auto& x : uf) x = open_uniform(rng);
    double vb = open_uniform(rng);
    double sa = ub, sf = vb;
    for (int i = 0; i < n; ++i) {
        sa += ua[i];
        sf += uf[i];
    }
    HeterogeneousAllocation a;
    for (int i = 0; i < n; ++i) {
        a.alpha.push_back(ua[i] * kRandomBudgetShare / sa);
        a.f.push_back(uf[i] * kRandomBudgetShare / sf * F);
    }
    a.alpha_bcfl = ub * kRandomBudgetShare / sa;
    a.f_bcfl = vb * kRandomBudgetShare / sf * F;
    return a;
}

void require_budgets(const Scenario& s, const Allocation& alloc) {
    auto rep = check_feasibility(s, alloc);
    if (!feasible_on(rep, {3, 4, 6}, kFeasibilityTol))
        throw InfeasibleAllocation("fixed baseline allocation violates the box or the resource budgets");
}

BaselineResult finish(SolverTrace trace, Allocation alloc, const Scenario& s) {
    BaselineResult r{std::move(trace), std::move(alloc), 0.0};
    r.cost = total_cost(s, r.allocation);
    return r;
}

}  // namespace

Allocation fixed_default_allocation(const Scenario& s, Shape shape) {
    if (shape == Shape::homogeneous) {
        MgState st = mg_initial_state(s, MgConfig{});
        return HomogeneousAllocation{st.alpha_star, st.f_star, st.alpha_bcfl, st.f_bcfl};
    }
    McState st = mc_initial_state(s, McConfig{});
    return HeterogeneousAllocation{st.alpha, st.f, st.alpha_bcfl, st.f_bcfl};
}

const char* baseline_name(const BaselineKind& kind) {
    switch (kind.index()) {
        case 0: return "random";
        case 1: return "fixed";
        case 2: return "gadmm";
        default: return "cadmm";
    }
}

BaselineKind parse_baseline(const std::string& name) {
    if (name == "random") return RandomBaseline{};
    if (name == "fixed") return FixedBaseline{};
    if (name == "gadmm") return GAdmmPinned{};
    if (name == "cadmm") return CAdmmPinned{};
    throw ValidationError("unknown baseline '" + name + "' (expected random, fixed, gadmm or cadmm)");
}

BaselineResult run_baseline(const BaselineKind& kind, const Scenario& s, const BaselineOptions& o) {
    s.validate();
    s.require_storage();
    if (o.iterations < 1) throw ValidationError("iterations must be at least 1");
    const double F = s.server.cpu_max;

    if (std::holds_alternative<RandomBaseline>(kind)) {
        std::mt19937_64 rng(o.seed);
        SolverTrace t = static_trace();
        Allocation last;
        for (int k = 1; k <= o.iterations; ++k) {
            last = random_allocation(s, o.shape, rng);
            t.records.push_back(record_of(k, last, s));
        }
        t.iterations_used = o.iterations;
        return finish(std::move(t), std::move(last), s);
    }
    if (const auto* fx = std::get_if<FixedBaseline>(&kind)) {
        Allocation a = fx->allocation ? *fx->allocation : fixed_default_allocation(s, o.shape);
        require_budgets(s, a);
        SolverTrace t = static_trace();
        for (int k = 1; k <= o.iterations; ++k) t.records.push_back(record_of(k, a, s));
        t.iterations_used = o.iterations;
        t.converged = true;
        return finish(std::move(t), std::move(a), s);
    }
    if (const auto* g = std::get_if<GAdmmPinned>(&kind)) {
        if (!(g->alpha_bcfl > 0 && g->alpha_bcfl < 1 && g->f_bcfl_fraction > 0 && g->f_bcfl_fraction < 1))
            throw ValidationError("pinned BCFL constants must lie inside the box");
        auto r = solve_mg_pinned(s, o.mg, g->alpha_bcfl, g->f_bcfl_fraction * F, o.iterations);
        return finish(std::move(r.trace), r.allocation, s);
    }
    const auto& c = std::get<CAdmmPinned>(kind);
    auto r = solve_mc_pinned(s, o.mc, c.alpha_bcfl, c.f_bcfl_fraction * F, o.iterations);
    return finish(std::move(r.trace), r.allocation, s);
}

}  // namespace edgealloc

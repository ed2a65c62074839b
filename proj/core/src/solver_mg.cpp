#include "edgealloc/solver_mg.hpp"

#include <cmath>

#include "admm_common.hpp"

namespace edgealloc {

using detail::dual_update;
using detail::hinge_term;

namespace {

/// Coefficients of the equal-split problem, precomputed once per scenario.
struct MgProblem {
    double n;
    double F;
    double comm_dev;   // Σ_i P_i·D_i/(B·L_i), divided by α_star gives the device comm energy
    double comp_dev;   // Σ_i γ·μ_i
    double t_comm;     // D/(B·L) of one device
    double mu;         // μ of one device
    double T;
    double comm_b;     // P_bcfl·D̂_bcfl/(B·L_bcfl)
    double comp_b;     // γ·μ_bcfl
    double t_comm_b;   // D̂_bcfl/(B·L_bcfl)
    double mu_b;
    double T_b;
    double g5;

    explicit MgProblem(const Scenario& s) {
        const auto& sv = s.server;
        n = s.size();
        F = sv.cpu_max;
        comm_dev = comp_dev = 0.0;
        for (const auto& d : s.devices) {
            double L = sv.bandwidth * spectral_efficiency(d.tx_power, d.channel_gain, sv.noise);
            comm_dev += d.tx_power * d.data_size / L;
            comp_dev += sv.cpu_energy_coeff * d.cycles();
        }
        const auto& d0 = s.devices.front();
        t_comm = d0.data_size / (sv.bandwidth * spectral_efficiency(d0.tx_power, d0.channel_gain, sv.noise));
        mu = d0.cycles();
        T = d0.time_budget;
        const auto& b = s.bcfl;
        double Lb = sv.bandwidth * spectral_efficiency(b.tx_power, b.channel_gain, sv.noise);
        comm_b = b.tx_power * b.tx_data_size / Lb;
        comp_b = sv.cpu_energy_coeff * b.cycles();
        t_comm_b = b.tx_data_size / Lb;
        mu_b = b.cycles();
        T_b = b.time_budget;
        g5 = -s.storage_slack();
    }

    double objective(double a, double ab, double f, double fb) const {
        return comm_dev / a + comm_b / ab + comp_dev * f * f + comp_b * fb * fb;
    }

    std::array<double, 5> constraints(double a, double ab, double f, double fb) const {
        return {t_comm_b / ab + mu_b / fb - T_b,
                t_comm / a + mu / f - T,
                ab + n * a - 1.0,
                (fb + n * f - F) / F,
                g5};
    }

    double lagrangian(double a, double ab, double f, double fb, const std::array<double, 5>& lam,
                      double rho) const {
        double v = objective(a, ab, f, fb);
        auto g = constraints(a, ab, f, fb);
        for (int m = 0; m < 5; ++m) v += hinge_term(lam[m], g[m], rho);
        return v;
    }
};

void require_homogeneous(const Scenario& s) {
    s.validate();
    if (!s.homogeneous()) throw ValidationError("equal-split solver requires identical devices");
}

HomogeneousAllocation to_allocation(const MgState& s) {
    return {s.alpha_star, s.f_star, s.alpha_bcfl, s.f_bcfl};
}

IterationRecord record_of(const MgState& s, const MgProblem& p, const std::array<double, 8>& res) {
    IterationRecord r;
    r.k = s.k;
    r.alpha = {s.alpha_star};
    r.f = {s.f_star};
    r.alpha_bcfl = s.alpha_bcfl;
    r.f_bcfl = s.f_bcfl;
    r.multipliers.assign(s.lambda.begin(), s.lambda.end());
    r.objective = p.objective(s.alpha_star, s.alpha_bcfl, s.f_star, s.f_bcfl);
    r.residuals.assign(res.begin(), res.end());
    return r;
}

SolverTrace empty_trace(double psi) {
    SolverTrace t;
    t.multiplier_names = {"lambda1", "lambda2", "lambda3", "lambda4", "lambda5"};
    t.residual_names = {"d_alpha_star", "d_f_star", "d_alpha_bcfl", "d_f_bcfl", "c1", "c2", "c3", "c4"};
    t.thresholds.assign(8, psi);
    return t;
}

bool within(const std::array<double, 8>& res, double psi) {
    for (double r : res)
        if (!(r <= psi)) return false;
    return true;
}

/// Generic sweep shared by the full solver and the pinned baseline.
MgState sweep(const MgState& s, const MgProblem& p, const MgConfig& c, bool pinned) {
    const double rho = c.rho, pb = c.rho * c.beta / 2.0, tol = c.inner_tolerance;
    const double F = p.F, n = p.n;
    const auto& lam = s.lambda;
    MgState next = s;

    next.alpha_star = detail::argmin_named(
        [&](double x) { return p.lagrangian(x, s.alpha_bcfl, s.f_star, s.f_bcfl, lam, rho); }, 0.0, 1.0, tol,
        "alpha_star");
    const double a1 = next.alpha_star;

    if (pinned) {
        // Classic two-block form: f_star sees the new α_star, no proximal terms.
        next.f_star = detail::argmin_named(
            [&](double x) { return p.lagrangian(a1, s.alpha_bcfl, x, s.f_bcfl, lam, rho); }, 0.0, F, tol * F,
            "f_star");
    } else {
        // Proximal weights are taken on frequencies measured as fractions of F.
        next.alpha_bcfl = detail::argmin_named(
            [&](double x) {
                double d = x - s.alpha_bcfl;
                return p.lagrangian(a1, x, s.f_star, s.f_bcfl, lam, rho) + pb * d * d;
            },
            0.0, 1.0, tol, "alpha_bcfl");
        next.f_star = detail::argmin_named(
            [&](double x) {
                double d = (x - s.f_star) / F;
                return p.lagrangian(a1, s.alpha_bcfl, x, s.f_bcfl, lam, rho) + pb * n * n * d * d;
            },
            0.0, F, tol * F, "f_star");
        next.f_bcfl = detail::argmin_named(
            [&](double x) {
                double d = (x - s.f_bcfl) / F;
                return p.lagrangian(a1, s.alpha_bcfl, s.f_star, x, lam, rho) + pb * d * d;
            },
            0.0, F, tol * F, "f_bcfl");
    }

    auto g = p.constraints(next.alpha_star, next.alpha_bcfl, next.f_star, next.f_bcfl);
    for (int m = 0; m < 5; ++m) next.lambda[m] = dual_update(lam[m], g[m], c.rho, c.beta, c.dual_sign);
    next.k = s.k + 1;
    return next;
}

std::array<double, 8> stop_residuals(const MgState& a, const MgState& b, const MgProblem& p) {
    auto sq = [](double x) { return x * x; };
    auto g = p.constraints(b.alpha_star, b.alpha_bcfl, b.f_star, b.f_bcfl);
    return {sq(b.alpha_star - a.alpha_star), sq(b.f_star - a.f_star), sq(b.alpha_bcfl - a.alpha_bcfl),
            sq(b.f_bcfl - a.f_bcfl), std::max(g[0], 0.0), std::max(g[1], 0.0), std::max(g[2], 0.0),
            std::max(g[3], 0.0)};
}

MgResult run(const Scenario& scenario, const MgConfig& config, MgState state, bool pinned, int max_iters) {
    const MgProblem p(scenario);
    MgResult out;
    out.trace = empty_trace(config.psi);
    for (int it = 0; it < max_iters; ++it) {
        MgState next = sweep(state, p, config, pinned);
        auto res = stop_residuals(state, next, p);
        out.trace.records.push_back(record_of(next, p, res));
        state = next;
        if (within(res, config.psi)) {
            out.trace.converged = true;
            break;
        }
    }
    out.trace.iterations_used = static_cast<int>(out.trace.records.size());
    out.state = state;
    out.allocation = to_allocation(state);
    return out;
}

}  // namespace

void MgConfig::validate() const {
    if (!(rho > 0)) throw ValidationError("rho must be positive");
    if (!(beta > 0)) throw ValidationError("beta must be positive");
    if (!(psi > 0)) throw ValidationError("psi must be positive");
    if (max_iters < 1) throw ValidationError("max_iters must be at least 1");
    if (!(multiplier_init >= 0)) throw ValidationError("multiplier init must be non-negative");
    if (!(inner_tolerance > 0)) throw ValidationError("inner tolerance must be positive");
}

std::array<double, 5> mg_constraints(const MgState& s, const Scenario& scenario) {
    return MgProblem(scenario).constraints(s.alpha_star, s.alpha_bcfl, s.f_star, s.f_bcfl);
}

double mg_objective(const MgState& s, const Scenario& scenario) {
    return MgProblem(scenario).objective(s.alpha_star, s.alpha_bcfl, s.f_star, s.f_bcfl);
}

double mg_lagrangian(const MgState& s, const Scenario& scenario, const MgConfig& config) {
    return MgProblem(scenario).lagrangian(s.alpha_star, s.alpha_bcfl, s.f_star, s.f_bcfl, s.lambda, config.rho);
}

MgState mg_initial_state(const Scenario& scenario, const MgConfig& config) {
    const double n = scenario.size();
    const double F = scenario.server.cpu_max;
    MgState s;
    s.alpha_star = 1.0 / (2.0 * n + 2.0);
    s.alpha_bcfl = 0.25;
    s.f_star = F / (2.0 * n + 2.0);
    s.f_bcfl = F / 4.0;
    s.lambda.fill(config.multiplier_init);
    return s;
}

MgState mg_step(const MgState& state, const Scenario& scenario, const MgConfig& config) {
    return sweep(state, MgProblem(scenario), config, false);
}

std::array<double, 8> mg_stop_residuals(const MgState& prev, const MgState& next, const Scenario& scenario) {
    return stop_residuals(prev, next, MgProblem(scenario));
}

MgResult solve_mg(const Scenario& scenario, const MgConfig& config) {
    require_homogeneous(scenario);
    scenario.require_storage();
    config.validate();
    return run(scenario, config, mg_initial_state(scenario, config), false, config.max_iters);
}

MgResult solve_mg_pinned(const Scenario& scenario, const MgConfig& config, double alpha_bcfl, double f_bcfl,
                         int iterations) {
    require_homogeneous(scenario);
    scenario.require_storage();
    config.validate();
    if (iterations < 1) throw ValidationError("iterations must be at least 1");
    MgState s = mg_initial_state(scenario, config);
    s.alpha_bcfl = alpha_bcfl;
    s.f_bcfl = f_bcfl;
    return run(scenario, config, s, true, iterations);
}

}  // namespace edgealloc

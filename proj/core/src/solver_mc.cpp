#include "edgealloc/solver_mc.hpp"

#include <algorithm>
#include <cmath>

#include "admm_common.hpp"

namespace edgealloc {

using detail::dual_update;
using detail::hinge_term;

namespace {

// Sums over devices are taken in sorted order so that results do not depend on device order.
double sorted_sum(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

struct DeviceCoeffs {
    double comm;    // P·D/(B·L): comm energy is comm/α
    double t_comm;  // D/(B·L): comm time is t_comm/α
    double mu;
    double T;
    double comp;    // γ·μ·F²: comp energy is comp·φ²
};

/// Coefficients in normalized units, φ = f/F.
struct McProblem {
    int n;
    double F;
    std::vector<DeviceCoeffs> dev;
    double comm_b, t_comm_b, mu_b, T_b, comp_b;
    double g5;

    explicit McProblem(const Scenario& s) {
        const auto& sv = s.server;
        n = s.size();
        F = sv.cpu_max;
        for (const auto& d : s.devices) {
            double L = sv.bandwidth * spectral_efficiency(d.tx_power, d.channel_gain, sv.noise);
            dev.push_back({d.tx_power * d.data_size / L, d.data_size / L, d.cycles(), d.time_budget,
                           sv.cpu_energy_coeff * d.cycles() * F * F});
        }
        const auto& b = s.bcfl;
        double Lb = sv.bandwidth * spectral_efficiency(b.tx_power, b.channel_gain, sv.noise);
        comm_b = b.tx_power * b.tx_data_size / Lb;
        t_comm_b = b.tx_data_size / Lb;
        mu_b = b.cycles();
        T_b = b.time_budget;
        comp_b = sv.cpu_energy_coeff * b.cycles() * F * F;
        g5 = -s.storage_slack();
    }

    double g1(double ab, double pb) const { return t_comm_b / ab + mu_b / (pb * F) - T_b; }

    double g2(int i, double a, double p) const { return dev[i].t_comm / a + dev[i].mu / (p * F) - dev[i].T; }

    double device_cost(int i, double a, double p) const { return dev[i].comm / a + dev[i].comp * p * p; }

    double bcfl_cost(double ab, double pb) const { return comm_b / ab + comp_b * pb * pb; }
};

/// Normalized working copy of the parts of McState the local phase reads.
struct Normalized {
    std::vector<double> a, p;
    double ab, pb, ah, ph;
};

Normalized normalize(const McState& s, double F) {
    Normalized z;
    z.a = s.alpha;
    z.p.resize(s.f.size());
    for (std::size_t i = 0; i < s.f.size(); ++i) z.p[i] = s.f[i] / F;
    z.ab = s.alpha_bcfl;
    z.pb = s.f_bcfl / F;
    z.ah = s.alpha_hat;
    z.ph = s.f_hat / F;
    return z;
}

struct DeviceChoice {
    double a, p;
};

class LocalPhase {
public:
    LocalPhase(const McProblem& p, const McState& s, const McConfig& c, const std::optional<McPin>& pin)
        : P_(p), s_(s), c_(c), z_(normalize(s, p.F)), pin_(pin) {
        amin_.resize(P_.n);
        const double top = 1.0 - kBoxMargin;
        for (int i = 0; i < P_.n; ++i) {
            const auto& d = P_.dev[i];
            // Smallest α for which some φ < 1 still meets the device deadline.
            double room = d.T - d.mu / (P_.F * top);
            if (d.t_comm == 0.0) {
                amin_[i] = 0.0;
                if (room <= 0) fail_deadline(i);
                continue;
            }
            if (room <= 0) fail_deadline(i);
            amin_[i] = d.t_comm / room;
            if (amin_[i] + 2.0 * kBoxMargin >= top) fail_deadline(i);
        }
    }

    struct Outcome {
        std::vector<DeviceChoice> devices;
        double ab, pb;
        double nu3, nu4;
    };

    Outcome solve() {
        Outcome out = with_cpu_price(0.0);
        if (cpu_excess(out) <= 0) return out;
        double lo = 0.0, hi = 1.0;
        Outcome at_hi = with_cpu_price(hi);
        while (cpu_excess(at_hi) > 0) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e15) throw SolverError("CPU budget price did not clear");
            at_hi = with_cpu_price(hi);
        }
        for (int it = 0; it < kBisections; ++it) {
            double mid = 0.5 * (lo + hi);
            Outcome o = with_cpu_price(mid);
            if (cpu_excess(o) > 0) {
                lo = mid;
            } else {
                hi = mid;
                at_hi = std::move(o);
            }
        }
        return at_hi;
    }

private:
    static constexpr int kBisections = 60;

    [[noreturn]] static void fail_deadline(int i) {
        throw SolverError("device " + std::to_string(i + 1) + " cannot meet its time budget within the box");
    }

    double alpha_cap() const { return pin_ ? 1.0 - pin_->alpha_bcfl : 1.0; }
    double cpu_cap() const { return pin_ ? 1.0 - pin_->f_bcfl / P_.F : 1.0; }

    double cpu_excess(const Outcome& o) const {
        std::vector<double> ps;
        for (const auto& d : o.devices) ps.push_back(d.p);
        return sorted_sum(ps) + (pin_ ? 0.0 : o.pb) - cpu_cap();
    }

    double alpha_excess(const std::vector<DeviceChoice>& dv, double ab) const {
        std::vector<double> as;
        for (const auto& d : dv) as.push_back(d.a);
        return sorted_sum(as) + (pin_ ? 0.0 : ab) - alpha_cap();
    }

    /// Exact minimizer over φ for a fixed α: a clamped quadratic.
    std::pair<double, double> inner_cpu(int i, double a, double nu4) const {
        const auto& d = P_.dev[i];
        const double rho = c_.rho, eps = s_.epsilon[i];
        double lo = kBoxMargin;
        if (d.mu > 0) lo = std::max(lo, d.mu / ((d.T - d.t_comm / a) * P_.F));
        double p = (rho * z_.ph - eps - nu4) / (2.0 * d.comp + rho);
        lo = std::min(lo, 1.0 - kBoxMargin);
        p = std::clamp(p, lo, 1.0 - kBoxMargin);
        double dp = p - z_.ph;
        return {p, d.comp * p * p + eps * dp + 0.5 * rho * dp * dp + nu4 * p};
    }

    DeviceChoice device(int i, double nu3, double nu4) const {
        const auto& d = P_.dev[i];
        const double rho = c_.rho, th = s_.theta[i];
        auto fn = [&](double a) {
            double da = a - z_.ah;
            return d.comm / a + th * da + 0.5 * rho * da * da + nu3 * a + inner_cpu(i, a, nu4).second;
        };
        double a = detail::argmin_named(fn, amin_[i], 1.0, c_.inner_tolerance,
                                        "alpha/f of device " + std::to_string(i + 1));
        return {a, inner_cpu(i, a, nu4).first};
    }

    double bcfl_alpha(double nu3) const {
        const double rho = c_.rho, w = 0.5 * c_.rho * c_.beta;
        auto fn = [&](double x) {
            double d = x - z_.ab;
            return P_.comm_b / x + hinge_term(s_.eta1, P_.g1(x, z_.pb), rho) + w * d * d + nu3 * x;
        };
        return detail::argmin_named(fn, 0.0, 1.0, c_.inner_tolerance, "alpha_bcfl");
    }

    double bcfl_cpu(double ab, double nu4) const {
        const double rho = c_.rho, w = 0.5 * c_.rho * c_.beta;
        auto fn = [&](double x) {
            double d = x - z_.pb;
            return P_.comp_b * x * x + hinge_term(s_.eta1, P_.g1(ab, x), rho) + w * d * d + nu4 * x;
        };
        return detail::argmin_named(fn, 0.0, 1.0, c_.inner_tolerance, "f_bcfl");
    }

    std::pair<std::vector<DeviceChoice>, double> respond(double nu3, double nu4) const {
        std::vector<DeviceChoice> dv;
        dv.reserve(P_.n);
        for (int i = 0; i < P_.n; ++i) dv.push_back(device(i, nu3, nu4));
        double ab = pin_ ? pin_->alpha_bcfl : bcfl_alpha(nu3);
        return {std::move(dv), ab};
    }

    /// Clears the bandwidth budget for a given CPU price.
    Outcome with_cpu_price(double nu4) const {
        auto [dv, ab] = respond(0.0, nu4);
        double nu3 = 0.0;
        if (alpha_excess(dv, ab) > 0) {
            double lo = 0.0, hi = 1.0;
            auto at_hi = respond(hi, nu4);
            while (alpha_excess(at_hi.first, at_hi.second) > 0) {
                lo = hi;
                hi *= 2.0;
                if (hi > 1e15) throw SolverError("bandwidth budget price did not clear");
                at_hi = respond(hi, nu4);
            }
            for (int it = 0; it < kBisections; ++it) {
                double mid = 0.5 * (lo + hi);
                auto o = respond(mid, nu4);
                if (alpha_excess(o.first, o.second) > 0) {
                    lo = mid;
                } else {
                    hi = mid;
                    at_hi = std::move(o);
                }
            }
            dv = std::move(at_hi.first);
            ab = at_hi.second;
            nu3 = hi;
        }
        double pb = pin_ ? pin_->f_bcfl / P_.F : bcfl_cpu(ab, nu4);
        return {std::move(dv), ab, pb, nu3, nu4};
    }

    const McProblem& P_;
    const McState& s_;
    const McConfig& c_;
    Normalized z_;
    std::optional<McPin> pin_;
    std::vector<double> amin_;
};

std::array<double, 7> stop_residuals(const McState& a, const McState& b, const McProblem& P) {
    auto sq = [](double x) { return x * x; };
    const double F = P.F;
    double prim = 0.0, c2 = 0.0;
    for (int i = 0; i < P.n; ++i) {
        prim = std::max({prim, sq(b.alpha[i] - b.alpha_hat), sq((b.f[i] - b.f_hat) / F)});
        c2 = std::max(c2, P.g2(i, b.alpha[i], b.f[i] / F));
    }
    double dual = std::max(sq(b.alpha_hat - a.alpha_hat), sq((b.f_hat - a.f_hat) / F));
    double bc = std::max(sq(b.alpha_bcfl - a.alpha_bcfl), sq((b.f_bcfl - a.f_bcfl) / F));
    double c3 = sorted_sum(b.alpha) + b.alpha_bcfl - 1.0;
    double c4 = (sorted_sum(b.f) + b.f_bcfl - F) / F;
    return {prim, dual, bc, std::max(P.g1(b.alpha_bcfl, b.f_bcfl / F), 0.0), c2, std::max(c3, 0.0),
            std::max(c4, 0.0)};
}

IterationRecord record_of(const McState& s, const McProblem& P, const std::array<double, 7>& res) {
    IterationRecord r;
    r.k = s.k;
    r.alpha = s.alpha;
    r.f = s.f;
    r.alpha_bcfl = s.alpha_bcfl;
    r.f_bcfl = s.f_bcfl;
    r.multipliers = s.theta;
    r.multipliers.insert(r.multipliers.end(), s.epsilon.begin(), s.epsilon.end());
    r.multipliers.insert(r.multipliers.end(), {s.eta1, s.eta2, s.nu_bandwidth, s.nu_cpu});
    double u = P.bcfl_cost(s.alpha_bcfl, s.f_bcfl / P.F);
    std::vector<double> parts;
    for (int i = 0; i < P.n; ++i) parts.push_back(P.device_cost(i, s.alpha[i], s.f[i] / P.F));
    r.objective = u + sorted_sum(parts);
    r.residuals.assign(res.begin(), res.end());
    return r;
}

SolverTrace empty_trace(const McConfig& c, int n) {
    SolverTrace t;
    for (int i = 1; i <= n; ++i) t.multiplier_names.push_back("theta" + std::to_string(i));
    for (int i = 1; i <= n; ++i) t.multiplier_names.push_back("epsilon" + std::to_string(i));
    t.multiplier_names.insert(t.multiplier_names.end(), {"eta1", "eta2", "nu_bandwidth", "nu_cpu"});
    t.residual_names = {"prim", "dual", "d_bcfl", "c1", "c2", "c3", "c4"};
    t.thresholds = {c.psi_prim, c.psi_dual, c.psi, c.psi, c.psi, c.psi, c.psi};
    return t;
}

McResult run(const Scenario& scenario, const McConfig& config, McState state, const std::optional<McPin>& pin,
             int max_iters) {
    const McProblem P(scenario);
    McResult out;
    out.trace = empty_trace(config, P.n);
    for (int it = 0; it < max_iters; ++it) {
        McState next = mc_step(state, scenario, config, pin);
        auto res = stop_residuals(state, next, P);
        out.trace.records.push_back(record_of(next, P, res));
        state = std::move(next);
        bool ok = true;
        for (std::size_t m = 0; m < res.size(); ++m) ok = ok && res[m] <= out.trace.thresholds[m];
        if (ok) {
            out.trace.converged = true;
            break;
        }
    }
    out.trace.iterations_used = static_cast<int>(out.trace.records.size());
    out.allocation = {state.alpha, state.f, state.alpha_bcfl, state.f_bcfl};
    out.state = std::move(state);
    return out;
}

void check_pin(const Scenario& s, const McPin& pin) {
    if (!(pin.alpha_bcfl > 0 && pin.alpha_bcfl < 1)) throw ValidationError("pinned alpha_bcfl must lie in (0,1)");
    if (!(pin.f_bcfl > 0 && pin.f_bcfl < s.server.cpu_max))
        throw ValidationError("pinned f_bcfl must lie in (0,F)");
}

}  // namespace

void McConfig::validate() const {
    if (!(rho > 0)) throw ValidationError("rho must be positive");
    if (!(beta > 0)) throw ValidationError("beta must be positive");
    if (!(psi > 0 && psi_prim > 0 && psi_dual > 0)) throw ValidationError("stopping thresholds must be positive");
    if (max_iters < 1) throw ValidationError("max_iters must be at least 1");
    if (!(multiplier_init >= 0)) throw ValidationError("multiplier init must be non-negative");
    if (!(inner_tolerance > 0)) throw ValidationError("inner tolerance must be positive");
}

double mc_lagrangian(const McState& s, const Scenario& scenario, const McConfig& config) {
    const McProblem P(scenario);
    const double rho = config.rho, F = P.F;
    const double ph = s.f_hat / F;
    std::vector<double> terms;
    for (int i = 0; i < P.n; ++i) {
        double p = s.f[i] / F;
        double da = s.alpha[i] - s.alpha_hat, dp = p - ph;
        terms.push_back(P.device_cost(i, s.alpha[i], p) + s.theta[i] * da + s.epsilon[i] * dp +
                        0.5 * rho * (da * da + dp * dp));
    }
    double v = sorted_sum(terms) + P.bcfl_cost(s.alpha_bcfl, s.f_bcfl / F);
    v += hinge_term(s.eta1, P.g1(s.alpha_bcfl, s.f_bcfl / F), rho);
    // The storage square carries no ρ/2 factor.
    double r5 = detail::hinge_residual(s.eta2, P.g5, rho);
    v += s.eta2 * r5 + r5 * r5;
    return v;
}

McState mc_initial_state(const Scenario& scenario, const McConfig& config) {
    const int n = scenario.size();
    const double F = scenario.server.cpu_max;
    std::vector<double> sizes;
    for (const auto& d : scenario.devices) sizes.push_back(d.data_size);
    const double total = sorted_sum(sizes);
    McState s;
    for (int i = 0; i < n; ++i) {
        double share = total > 0 ? sizes[i] / (2.0 * total) : 1.0 / (2.0 * n);
        share = std::max(share, kBoxMargin);
        s.alpha.push_back(share);
        s.f.push_back(F * share);
    }
    s.alpha_bcfl = 0.25;
    s.f_bcfl = F / 4.0;
    s.alpha_hat = sorted_sum(s.alpha) / n;
    s.f_hat = sorted_sum(s.f) / n;
    s.theta.assign(n, config.multiplier_init);
    s.epsilon.assign(n, config.multiplier_init);
    s.eta1 = s.eta2 = config.multiplier_init;
    return s;
}

McState mc_step(const McState& state, const Scenario& scenario, const McConfig& config,
                const std::optional<McPin>& pin) {
    const McProblem P(scenario);
    const int n = P.n;
    if (static_cast<int>(state.alpha.size()) != n || static_cast<int>(state.f.size()) != n ||
        static_cast<int>(state.theta.size()) != n || static_cast<int>(state.epsilon.size()) != n)
        throw ValidationError("state and scenario disagree on the number of devices");
    const double F = P.F, rho = config.rho;

    auto local = LocalPhase(P, state, config, pin).solve();

    McState next = state;
    std::vector<double> sa, sp;
    for (int i = 0; i < n; ++i) {
        next.alpha[i] = local.devices[i].a;
        next.f[i] = local.devices[i].p * F;
        sa.push_back(local.devices[i].a + 0.5 * rho * state.theta[i]);
        sp.push_back(local.devices[i].p + 0.5 * rho * state.epsilon[i]);
    }
    next.alpha_bcfl = local.ab;
    next.f_bcfl = local.pb * F;
    const double ah = detail::clamp_interior(sorted_sum(sa) / n);
    const double ph = detail::clamp_interior(sorted_sum(sp) / n);
    next.alpha_hat = ah;
    next.f_hat = ph * F;

    for (int i = 0; i < n; ++i) {
        next.theta[i] = state.theta[i] + rho * (local.devices[i].a - ah);
        next.epsilon[i] = state.epsilon[i] + rho * (local.devices[i].p - ph);
    }
    next.eta1 = dual_update(state.eta1, P.g1(local.ab, local.pb), rho, config.beta, config.dual_sign);
    next.eta2 = dual_update(state.eta2, P.g5, rho, config.beta, config.dual_sign);
    next.nu_bandwidth = local.nu3;
    next.nu_cpu = local.nu4;
    next.k = state.k + 1;
    return next;
}

std::array<double, 7> mc_stop_residuals(const McState& prev, const McState& next, const Scenario& scenario) {
    return stop_residuals(prev, next, McProblem(scenario));
}

McResult solve_mc(const Scenario& scenario, const McConfig& config) {
    scenario.validate();
    scenario.require_storage();
    config.validate();
    return run(scenario, config, mc_initial_state(scenario, config), std::nullopt, config.max_iters);
}

McResult solve_mc_pinned(const Scenario& scenario, const McConfig& config, double alpha_bcfl, double f_bcfl,
                         int iterations) {
    scenario.validate();
    scenario.require_storage();
    config.validate();
    if (iterations < 1) throw ValidationError("iterations must be at least 1");
    McPin pin{alpha_bcfl, f_bcfl};
    check_pin(scenario, pin);
    McState s = mc_initial_state(scenario, config);
    s.alpha_bcfl = alpha_bcfl;
    s.f_bcfl = f_bcfl;
    return run(scenario, config, s, pin, iterations);
}

}  // namespace edgealloc

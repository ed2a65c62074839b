#include "edgealloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "edgealloc/scalar_opt.hpp"

namespace edgealloc {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " must be positive and finite");
}

bool in_open(double x, double hi) { return x > 0.0 && x < hi; }

void require_box(const HeterogeneousAllocation& a, double cpu_max) {
    auto bad = [](const std::string& name) {
        throw InfeasibleAllocation("C6 violated: " + name + " outside its open box");
    };
    for (std::size_t i = 0; i < a.alpha.size(); ++i) {
        if (!in_open(a.alpha[i], 1.0)) bad("alpha[" + std::to_string(i) + "]");
        if (!in_open(a.f[i], cpu_max)) bad("f[" + std::to_string(i) + "]");
    }
    if (!in_open(a.alpha_bcfl, 1.0)) bad("alpha_bcfl");
    if (!in_open(a.f_bcfl, cpu_max)) bad("f_bcfl");
}

}  // namespace

void Scenario::validate() const {
    if (devices.empty()) throw ValidationError("N must be at least 1");
    for (std::size_t i = 0; i < devices.size(); ++i) {
        const auto& d = devices[i];
        const std::string p = "device " + std::to_string(i + 1) + ": ";
        if (!(d.data_size >= 0) || !std::isfinite(d.data_size)) throw ValidationError(p + "D_i must be >= 0");
        require_positive(d.time_budget, (p + "T_i").c_str());
        require_positive(d.tx_power, (p + "P_i").c_str());
        require_positive(d.channel_gain, (p + "G_i").c_str());
        require_positive(d.cpu_density, (p + "d_i").c_str());
    }
    require_positive(bcfl.data_size, "D_bcfl");
    require_positive(bcfl.tx_data_size, "Dhat_bcfl");
    require_positive(bcfl.time_budget, "T_bcfl");
    require_positive(bcfl.tx_power, "P_bcfl");
    require_positive(bcfl.channel_gain, "G_bcfl");
    require_positive(bcfl.cpu_density, "d_bcfl");
    if (bcfl.tx_data_size > bcfl.data_size) throw ValidationError("Dhat_bcfl must not exceed D_bcfl");
    require_positive(server.bandwidth, "B");
    require_positive(server.cpu_max, "F");
    require_positive(server.storage, "D");
    require_positive(server.noise, "delta");
    require_positive(server.cpu_energy_coeff, "gamma");
}

double Scenario::storage_slack() const {
    double used = bcfl.data_size + bcfl.tx_data_size;
    for (const auto& d : devices) used += d.data_size;
    return server.storage - used;
}

void Scenario::require_storage() const {
    double s = storage_slack();
    if (s < 0)
        throw InfeasibleScenario("C5 violated: D_bcfl + Dhat_bcfl + sum D_i exceeds storage D by " +
                                 std::to_string(-s));
}

bool Scenario::homogeneous() const {
    return std::all_of(devices.begin(), devices.end(), [&](const DeviceTask& d) { return d == devices.front(); });
}

HeterogeneousAllocation expand(const Allocation& alloc, int n) {
    if (const auto* h = std::get_if<HomogeneousAllocation>(&alloc)) {
        return {std::vector<double>(n, h->alpha_star), std::vector<double>(n, h->f_star), h->alpha_bcfl, h->f_bcfl};
    }
    const auto& het = std::get<HeterogeneousAllocation>(alloc);
    if (static_cast<int>(het.alpha.size()) != n || static_cast<int>(het.f.size()) != n)
        throw ValidationError("allocation has " + std::to_string(het.alpha.size()) + " devices, scenario has " +
                              std::to_string(n));
    return het;
}

double spectral_efficiency(double power, double gain, double noise) {
    return std::log2(1.0 + power * gain / (noise * noise));
}

double transmission_rate(double alpha, double bandwidth, double power, double gain, double noise) {
    if (!in_open(alpha, 1.0)) throw DomainError("transmission_rate: alpha must lie in (0,1)");
    if (!(bandwidth > 0 && power > 0 && gain > 0 && noise > 0))
        throw DomainError("transmission_rate: physical parameters must be positive");
    return alpha * bandwidth * spectral_efficiency(power, gain, noise);
}

double comm_time(double data_size, double rate) {
    if (!(rate > 0)) throw DomainError("comm_time: rate must be positive");
    if (data_size < 0) throw DomainError("comm_time: data size must be non-negative");
    return data_size / rate;
}

double comm_energy(double power, double t) {
    if (t < 0) throw DomainError("comm_energy: time must be non-negative");
    if (!(power > 0)) throw DomainError("comm_energy: power must be positive");
    return power * t;
}

double comp_time(double cycles, double f) {
    if (!(f > 0)) throw DomainError("comp_time: frequency must be positive");
    if (cycles < 0) throw DomainError("comp_time: cycles must be non-negative");
    return cycles / f;
}

double comp_energy(double gamma, double cycles, double f) {
    if (!(f > 0)) throw DomainError("comp_energy: frequency must be positive");
    if (gamma < 0 || cycles < 0) throw DomainError("comp_energy: gamma and cycles must be non-negative");
    return gamma * cycles * f * f;
}

double total_cost(const Scenario& s, const Allocation& alloc) {
    const auto a = expand(alloc, s.size());
    require_box(a, s.server.cpu_max);
    const auto& sv = s.server;
    double u = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        const auto& d = s.devices[i];
        double r = transmission_rate(a.alpha[i], sv.bandwidth, d.tx_power, d.channel_gain, sv.noise);
        u += comm_energy(d.tx_power, comm_time(d.data_size, r));
        u += comp_energy(sv.cpu_energy_coeff, d.cycles(), a.f[i]);
    }
    const auto& b = s.bcfl;
    double rb = transmission_rate(a.alpha_bcfl, sv.bandwidth, b.tx_power, b.channel_gain, sv.noise);
    u += comm_energy(b.tx_power, comm_time(b.tx_data_size, rb));
    u += comp_energy(sv.cpu_energy_coeff, b.cycles(), a.f_bcfl);
    return u;
}

TaskLatencies task_latencies(const Scenario& s, const Allocation& alloc) {
    const auto a = expand(alloc, s.size());
    const auto& sv = s.server;
    TaskLatencies out;
    for (int i = 0; i < s.size(); ++i) {
        const auto& d = s.devices[i];
        double r = transmission_rate(a.alpha[i], sv.bandwidth, d.tx_power, d.channel_gain, sv.noise);
        double tc = comm_time(d.data_size, r);
        double tp = comp_time(d.cycles(), a.f[i]);
        out.device_comm.push_back(tc);
        out.device_comp.push_back(tp);
        out.device_total.push_back(tc + tp);
    }
    const auto& b = s.bcfl;
    double rb = transmission_rate(a.alpha_bcfl, sv.bandwidth, b.tx_power, b.channel_gain, sv.noise);
    out.bcfl_comm = comm_time(b.tx_data_size, rb);
    out.bcfl_comp = comp_time(b.cycles(), a.f_bcfl);
    out.bcfl_total = out.bcfl_comm + out.bcfl_comp;
    return out;
}

double FeasibilityReport::min_c2() const {
    return c2.empty() ? std::numeric_limits<double>::infinity() : *std::min_element(c2.begin(), c2.end());
}

FeasibilityReport check_feasibility(const Scenario& s, const Allocation& alloc, double tol) {
    const auto a = expand(alloc, s.size());
    const double F = s.server.cpu_max;
    const double inf = std::numeric_limits<double>::infinity();
    FeasibilityReport r;

    double box = inf;
    auto margin = [&](double x, double hi) { box = std::min(box, std::min(x, hi - x)); };
    for (int i = 0; i < s.size(); ++i) {
        margin(a.alpha[i], 1.0);
        margin(a.f[i], F);
    }
    margin(a.alpha_bcfl, 1.0);
    margin(a.f_bcfl, F);
    // The box is open, so a variable sitting on a bound counts as a violation of size 0⁺.
    r.c6 = box > 0 ? box : std::min(box, -std::numeric_limits<double>::min());

    auto device_time = [&](int i) {
        const auto& d = s.devices[i];
        if (!in_open(a.alpha[i], 1.0) || !(a.f[i] > 0)) return inf;
        double rate = transmission_rate(a.alpha[i], s.server.bandwidth, d.tx_power, d.channel_gain, s.server.noise);
        return comm_time(d.data_size, rate) + comp_time(d.cycles(), a.f[i]);
    };
    r.c2.resize(s.size());
    for (int i = 0; i < s.size(); ++i) r.c2[i] = s.devices[i].time_budget - device_time(i);

    const auto& b = s.bcfl;
    double tb = inf;
    if (in_open(a.alpha_bcfl, 1.0) && a.f_bcfl > 0) {
        double rate = transmission_rate(a.alpha_bcfl, s.server.bandwidth, b.tx_power, b.channel_gain, s.server.noise);
        tb = comm_time(b.tx_data_size, rate) + comp_time(b.cycles(), a.f_bcfl);
    }
    r.c1 = b.time_budget - tb;

    double sa = a.alpha_bcfl, sf = a.f_bcfl;
    for (int i = 0; i < s.size(); ++i) {
        sa += a.alpha[i];
        sf += a.f[i];
    }
    r.c3 = 1.0 - sa;
    r.c4 = F - sf;
    r.c5 = s.storage_slack();

    double worst = std::min({r.c1, r.min_c2(), r.c3, r.c4, r.c5, r.c6});
    r.worst_violation = std::max(0.0, -worst);
    r.overall_feasible = feasible_on(r, {1, 2, 3, 4, 5, 6}, tol);
    return r;
}

bool feasible_on(const FeasibilityReport& r, std::initializer_list<int> constraints, double tol) {
    for (int c : constraints) {
        double slack = 0.0;
        switch (c) {
            case 1: slack = r.c1; break;
            case 2: slack = r.min_c2(); break;
            case 3: slack = r.c3; break;
            case 4: slack = r.c4; break;
            case 5: slack = r.c5; break;
            case 6:
                // The open box is never relaxed by the tolerance.
                if (!(r.c6 > 0)) return false;
                continue;
            default: throw DomainError("feasible_on: constraint index must be 1..6");
        }
        if (!(slack >= -tol)) return false;
    }
    return true;
}

HessianReport numeric_hessian_check(const Scenario& s, const Allocation& alloc, double h) {
    if (!(h > 0)) throw DomainError("numeric_hessian_check: step must be positive");
    const double F = s.server.cpu_max;
    const bool homo = std::holds_alternative<HomogeneousAllocation>(alloc);
    const int n = homo ? 1 : s.size();

    // x = [α-part, α_bcfl, f-part, f_bcfl]
    Eigen::VectorXd x(2 * n + 2), steps(2 * n + 2);
    if (homo) {
        const auto& a = std::get<HomogeneousAllocation>(alloc);
        x << a.alpha_star, a.alpha_bcfl, a.f_star, a.f_bcfl;
    } else {
        const auto a = expand(alloc, s.size());
        for (int i = 0; i < n; ++i) {
            x[i] = a.alpha[i];
            x[n + 1 + i] = a.f[i];
        }
        x[n] = a.alpha_bcfl;
        x[2 * n + 1] = a.f_bcfl;
    }
    for (int i = 0; i <= n; ++i) {
        steps[i] = h;
        steps[n + 1 + i] = h * F;
        if (!(x[i] - h > 0 && x[i] + h < 1) || !(x[n + 1 + i] - h * F > 0 && x[n + 1 + i] + h * F < F))
            throw DomainError("numeric_hessian_check: step too large to keep evaluation points interior");
    }

    auto rebuild = [&](const Eigen::VectorXd& v) -> Allocation {
        if (homo) return HomogeneousAllocation{v[0], v[2], v[1], v[3]};
        HeterogeneousAllocation a;
        a.alpha.assign(v.data(), v.data() + n);
        a.f.assign(v.data() + n + 1, v.data() + 2 * n + 1);
        a.alpha_bcfl = v[n];
        a.f_bcfl = v[2 * n + 1];
        return a;
    };
    HessianReport rep;
    rep.hessian = finite_diff_hessian([&](const Eigen::VectorXd& v) { return total_cost(s, rebuild(v)); }, x, steps);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rep.hessian, Eigen::EigenvaluesOnly);
    rep.eigenvalues = eig.eigenvalues();
    rep.min_eigenvalue = rep.eigenvalues.minCoeff();
    rep.max_eigenvalue = rep.eigenvalues.maxCoeff();
    rep.positive_definite = rep.min_eigenvalue > 0;
    return rep;
}

Scenario identical_scenario(int n) {
    Scenario s;
    s.devices.assign(n, DeviceTask{});
    return s;
}

Scenario heterogeneous_scenario(int n) {
    Scenario s;
    for (int i = 1; i <= n; ++i) {
        DeviceTask d;
        d.data_size = i;
        d.time_budget = i;
        s.devices.push_back(d);
    }
    return s;
}

}  // namespace edgealloc

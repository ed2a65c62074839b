#pragma once

#include <Eigen/Dense>

#include <variant>
#include <vector>

#include "edgealloc/errors.hpp"

namespace edgealloc {

/// Interior margin kept from the open box bounds (0,1) and (0,F) during optimization.
inline constexpr double kBoxMargin = 1e-6;
/// Default absolute slack tolerance for feasibility checks.
inline constexpr double kFeasibilityTol = 1e-6;

/// Offloading request of one local device.
struct DeviceTask {
    double data_size = 10.0;     ///< D_i
    double time_budget = 10.0;   ///< T_i
    double tx_power = 2.0;       ///< P_i
    double channel_gain = 10.0;  ///< G_i
    double cpu_density = 2.0;    ///< d_i, cycles per data unit

    double cycles() const { return data_size * cpu_density; }
    bool operator==(const DeviceTask&) const = default;
};

/// Aggregate training/mining workload of the blockchain-based FL task.
struct BcflTask {
    double data_size = 10.0;     ///< D_bcfl
    double tx_data_size = 5.0;   ///< D̂_bcfl, the part that is transmitted
    double time_budget = 50.0;   ///< T_bcfl
    double tx_power = 2.0;
    double channel_gain = 10.0;
    double cpu_density = 2.0;

    double cycles() const { return data_size * cpu_density; }
    bool operator==(const BcflTask&) const = default;
};

struct ServerResources {
    double bandwidth = 100.0;          ///< B
    double cpu_max = 1000.0;           ///< F
    double storage = 1000.0;           ///< D
    double noise = 0.1;                ///< δ
    double cpu_energy_coeff = 1e-3;    ///< γ

    bool operator==(const ServerResources&) const = default;
};

struct Scenario {
    std::vector<DeviceTask> devices;
    BcflTask bcfl;
    ServerResources server;

    int size() const { return static_cast<int>(devices.size()); }
    /// Throws ValidationError when a field invariant fails. Does not check C5.
    void validate() const;
    /// D − (D_bcfl + D̂_bcfl + ΣD_i); negative means C5 is violated.
    double storage_slack() const;
    /// Throws InfeasibleScenario when C5 is violated.
    void require_storage() const;
    /// True when every device task is identical.
    bool homogeneous() const;

    bool operator==(const Scenario&) const = default;
};

/// Equal split: every device receives α_star and f_star.
struct HomogeneousAllocation {
    double alpha_star = 0.0;
    double f_star = 0.0;
    double alpha_bcfl = 0.0;
    double f_bcfl = 0.0;
};

struct HeterogeneousAllocation {
    std::vector<double> alpha;
    std::vector<double> f;
    double alpha_bcfl = 0.0;
    double f_bcfl = 0.0;
};

using Allocation = std::variant<HomogeneousAllocation, HeterogeneousAllocation>;

/// Per-device view of any allocation (a homogeneous one is replicated N times).
HeterogeneousAllocation expand(const Allocation& alloc, int n);

double transmission_rate(double alpha, double bandwidth, double power, double gain, double noise);
double comm_time(double data_size, double rate);
double comm_energy(double power, double t);
double comp_time(double cycles, double f);
double comp_energy(double gamma, double cycles, double f);

/// log₂(1 + P·G/δ²), the rate per unit of bandwidth.
double spectral_efficiency(double power, double gain, double noise);

/// Total energy U. Throws InfeasibleAllocation when a variable leaves the open box C6.
double total_cost(const Scenario& scenario, const Allocation& alloc);

struct TaskLatencies {
    std::vector<double> device_comm, device_comp, device_total;
    double bcfl_comm = 0.0, bcfl_comp = 0.0, bcfl_total = 0.0;
};

TaskLatencies task_latencies(const Scenario& scenario, const Allocation& alloc);

/// Slack of each constraint; negative slack is a violation.
struct FeasibilityReport {
    double c1 = 0.0;                ///< T_bcfl − T^bcfl
    std::vector<double> c2;         ///< T_i − T_i^mec per device
    double c3 = 0.0;                ///< 1 − (α_bcfl + Σα_i)
    double c4 = 0.0;                ///< F − (f_bcfl + Σf_i)
    double c5 = 0.0;                ///< storage slack
    double c6 = 0.0;                ///< smallest distance of any variable to its open box bound
    bool overall_feasible = false;
    double worst_violation = 0.0;   ///< max(0, −min slack)

    double min_c2() const;
};

/// Never throws for finite inputs; variables outside the box yield −∞ time slacks.
FeasibilityReport check_feasibility(const Scenario& scenario, const Allocation& alloc,
                                    double tol = kFeasibilityTol);

/// Feasibility restricted to the listed constraints (1..6).
bool feasible_on(const FeasibilityReport& r, std::initializer_list<int> constraints, double tol);

struct HessianReport {
    Eigen::MatrixXd hessian;
    Eigen::VectorXd eigenvalues;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    bool positive_definite = false;
};

/// Central-difference Hessian of total_cost. Variable order: α-part, α_bcfl, f-part, f_bcfl.
/// Fractions are stepped by h and frequencies by h·F.
HessianReport numeric_hessian_check(const Scenario& scenario, const Allocation& alloc, double h = 1e-4);

/// Ten identical devices with the default task parameters.
Scenario identical_scenario(int n = 10);
/// Heterogeneous evaluation scenario: D_i = T_i = i.
Scenario heterogeneous_scenario(int n = 10);

}  // namespace edgealloc

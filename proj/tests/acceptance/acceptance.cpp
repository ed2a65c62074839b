// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles/cost_oracle.hpp"
#include "../oracles/grid_search.hpp"
#include "edgealloc/baselines.hpp"
#include "edgealloc/harness.hpp"

using namespace edgealloc;
namespace fs = std::filesystem;

namespace {

// Tolerances, fixed here so that every run is judged the same way.
constexpr int kMgMinIters = 20, kMgMaxIters = 120;
constexpr double kMgMaxSeconds = 5.0;
constexpr int kMcMaxIters = 60;
constexpr double kMcMaxSeconds = 10.0;
constexpr int kRandomSeeds = 10;
constexpr int kMaxInversion = 5;          // one inversion of at most this many iterations per sweep
constexpr double kDataScale = 1.2;
constexpr double kStrictRel = 1e-4;       // a "strict" change must exceed this relative amount
constexpr double kWeakSlack = 1e-3;       // a "weak" increase may fall by at most this much
constexpr double kMgOracleGap = 0.02, kMcOracleGap = 0.03;
constexpr double kOracleMaxSeconds = 60.0;
constexpr int kConvexitySamples = 100;
constexpr double kFeasTol = 1e-3;

struct Verdict {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Every converged solution seen while checking the other criteria, for criterion 11.
struct Solved {
    std::string label;
    Scenario scenario;
    Allocation allocation;
};
std::vector<Solved> g_converged;

MgResult mg(const Scenario& s, const MgConfig& c, const std::string& label) {
    auto r = solve_mg(s, c);
    if (r.trace.converged) g_converged.push_back({label, s, r.allocation});
    return r;
}

McResult mc(const Scenario& s, const McConfig& c, const std::string& label) {
    auto r = solve_mc(s, c);
    if (r.trace.converged) g_converged.push_back({label, s, r.allocation});
    return r;
}

MgConfig mg_defaults() { return {}; }
McConfig mc_defaults() {
    McConfig c;
    c.beta = 1.0;
    return c;
}

/// Non-increasing with at most one inversion of ≤ kMaxInversion.
bool non_increasing(const std::vector<int>& it) {
    int inversions = 0;
    for (std::size_t k = 1; k < it.size(); ++k) {
        int up = it[k] - it[k - 1];
        if (up > 0) {
            if (up > kMaxInversion) return false;
            ++inversions;
        }
    }
    return inversions <= 1;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

bool strictly_up(double before, double after) { return after - before > kStrictRel * std::abs(before); }
bool strictly_down(double before, double after) { return before - after > kStrictRel * std::abs(before); }

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

Scenario scaled_devices(Scenario s) {
    for (auto& d : s.devices) d.data_size *= kDataScale;
    return s;
}

Scenario scaled_bcfl(Scenario s) {
    s.bcfl.data_size *= kDataScale;
    s.bcfl.tx_data_size *= kDataScale;
    return s;
}

// ---------------------------------------------------------------------------

Verdict c1_mg_envelope() {
    auto t0 = std::chrono::steady_clock::now();
    auto r = mg(identical_scenario(), mg_defaults(), "mg identical");
    double t = seconds_since(t0);
    int it = r.trace.iterations_used;
    return {r.trace.converged && it >= kMgMinIters && it <= kMgMaxIters && t < kMgMaxSeconds,
            fmt("converged=%d iterations=%d (want %d..%d) runtime=%.3fs (< %.0fs)", r.trace.converged, it,
                kMgMinIters, kMgMaxIters, t, kMgMaxSeconds)};
}

Verdict c2_mc_envelope() {
    auto t0 = std::chrono::steady_clock::now();
    auto r = mc(heterogeneous_scenario(), mc_defaults(), "mc heterogeneous");
    double t = seconds_since(t0);
    int it = r.trace.iterations_used;
    return {r.trace.converged && it <= kMcMaxIters && t < kMcMaxSeconds,
            fmt("converged=%d iterations=%d (want <= %d) runtime=%.3fs (< %.0fs)", r.trace.converged, it,
                kMcMaxIters, t, kMcMaxSeconds)};
}

Verdict c3_relative_speed() {
    int a = solve_mg(identical_scenario(), mg_defaults()).trace.iterations_used;
    int b = solve_mc(heterogeneous_scenario(), mc_defaults()).trace.iterations_used;
    return {b < a, fmt("mc=%d mg=%d", b, a)};
}

Verdict c4_baselines() {
    bool ok = true;
    std::string detail;
    auto run_side = [&](const char* tag, const Scenario& s, double own, Shape shape, const BaselineKind& pinned) {
        BaselineOptions o;
        o.shape = shape;
        o.mg = mg_defaults();
        o.mc = mc_defaults();
        std::vector<double> rnd;
        for (int seed = 1; seed <= kRandomSeeds; ++seed) {
            o.seed = seed;
            rnd.push_back(run_baseline(RandomBaseline{}, s, o).cost);
        }
        double fixed = run_baseline(FixedBaseline{}, s, o).cost;
        BaselineOptions po = o;
        po.iterations = shape == Shape::homogeneous ? o.mg.max_iters : o.mc.max_iters;
        double pin = run_baseline(pinned, s, po).cost;
        double r = mean(rnd);
        ok = ok && own <= r && own <= fixed && own <= pin;
        detail += fmt("%s=%.5g random=%.5g fixed=%.5g %s=%.5g; ", tag, own, r, fixed, baseline_name(pinned), pin);
    };
    Scenario t = identical_scenario();
    run_side("mg", t, total_cost(t, solve_mg(t, mg_defaults()).allocation), Shape::homogeneous, GAdmmPinned{});
    Scenario h = heterogeneous_scenario();
    run_side("mc", h, total_cost(h, solve_mc(h, mc_defaults()).allocation), Shape::heterogeneous, CAdmmPinned{});
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

Verdict c5_penalty() {
    bool ok = true;
    std::string detail;
    auto sweep = [&](const char* tag, const std::vector<double>& values, auto&& iters) {
        std::vector<int> it;
        for (double v : values) it.push_back(iters(v));
        bool pass = non_increasing(it);
        ok = ok && pass;
        detail += fmt("%s[%s]%s ", tag, join(it).c_str(), pass ? "" : "!");
    };
    sweep("mg rho", {0.1, 0.5, 1.0}, [](double v) {
        MgConfig c = mg_defaults();
        c.rho = v;
        return mg(identical_scenario(), c, "mg rho sweep").trace.iterations_used;
    });
    sweep("mg beta", {0.1, 0.5, 1.0}, [](double v) {
        MgConfig c = mg_defaults();
        c.beta = v;
        return mg(identical_scenario(), c, "mg beta sweep").trace.iterations_used;
    });
    sweep("mc rho", {0.10, 0.45, 0.50}, [](double v) {
        McConfig c = mc_defaults();
        c.rho = v;
        return mc(heterogeneous_scenario(), c, "mc rho sweep").trace.iterations_used;
    });
    sweep("mc beta", {0.1, 0.5, 1.0}, [](double v) {
        McConfig c = mc_defaults();
        c.beta = v;
        return mc(heterogeneous_scenario(), c, "mc beta sweep").trace.iterations_used;
    });
    detail.pop_back();
    return {ok, detail};
}

Verdict c6_device_count() {
    bool ok = true;
    std::string detail;
    for (int solver = 0; solver < 2; ++solver) {
        std::vector<double> cost;
        std::vector<int> it;
        for (int n : {8, 9, 10}) {
            if (solver == 0) {
                Scenario s = identical_scenario(n);
                auto r = mg(s, mg_defaults(), "mg N=" + std::to_string(n));
                cost.push_back(total_cost(s, r.allocation));
                it.push_back(r.trace.iterations_used);
            } else {
                Scenario s = heterogeneous_scenario(n);
                auto r = mc(s, mc_defaults(), "mc N=" + std::to_string(n));
                cost.push_back(total_cost(s, r.allocation));
                it.push_back(r.trace.iterations_used);
            }
        }
        bool pass = cost[0] < cost[1] && cost[1] < cost[2] && it[0] <= it[1] && it[1] <= it[2];
        ok = ok && pass;
        detail += fmt("%s cost %.5g<%.5g<%.5g iters %s%s; ", solver ? "mc" : "mg", cost[0], cost[1], cost[2],
                      join(it).c_str(), pass ? "" : " !");
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

struct Shares {
    double alpha, f, alpha_bcfl, f_bcfl;
};

Shares shares_of(const Allocation& a, int n) {
    auto h = expand(a, n);
    return {mean(h.alpha), mean(h.f), h.alpha_bcfl, h.f_bcfl};
}

Verdict c7_data_trends() {
    bool ok = true;
    std::string detail;
    auto one = [&](const char* tag, auto&& solve, const Scenario& base) {
        const int n = base.size();
        Shares a = shares_of(solve(base), n);
        Shares d = shares_of(solve(scaled_devices(base)), n);
        Shares b = shares_of(solve(scaled_bcfl(base)), n);
        // Larger device data: device side up, BCFL side down. Larger BCFL data: the reverse.
        const bool checks[8] = {strictly_up(a.alpha, d.alpha),           strictly_up(a.f, d.f),
                                strictly_down(a.alpha_bcfl, d.alpha_bcfl), strictly_down(a.f_bcfl, d.f_bcfl),
                                strictly_down(a.alpha, b.alpha),         strictly_down(a.f, b.f),
                                strictly_up(a.alpha_bcfl, b.alpha_bcfl), strictly_up(a.f_bcfl, b.f_bcfl)};
        const char* names[8] = {"D:alpha+", "D:f+", "D:alpha_bcfl-", "D:f_bcfl-",
                                "Db:alpha-", "Db:f-", "Db:alpha_bcfl+", "Db:f_bcfl+"};
        std::string bad;
        for (int k = 0; k < 8; ++k)
            if (!checks[k]) bad += std::string(bad.empty() ? "" : ",") + names[k];
        ok = ok && bad.empty();
        detail += fmt("%s f_bcfl %.6f->%.6f (D) f %.6f->%.6f (Db) %s; ", tag, a.f_bcfl, d.f_bcfl, a.f, b.f,
                      bad.empty() ? "all hold" : ("violated: " + bad).c_str());
    };
    one("mg", [](const Scenario& s) { return Allocation{mg(s, mg_defaults(), "mg data trend").allocation}; },
        identical_scenario());
    one("mc", [](const Scenario& s) { return Allocation{mc(s, mc_defaults(), "mc data trend").allocation}; },
        heterogeneous_scenario());
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

Verdict c8_latency_trends() {
    bool ok = true;
    std::string detail;
    auto one = [&](const char* tag, auto&& solve, const Scenario& base) {
        Scenario sd = scaled_devices(base), sb = scaled_bcfl(base);
        auto a = task_latencies(base, solve(base));
        auto d = task_latencies(sd, solve(sd));
        auto b = task_latencies(sb, solve(sb));
        bool dev_up = true;
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < base.size(); ++i) {
            dev_up = dev_up && strictly_up(a.device_total[i], d.device_total[i]);
            worst = std::min(worst, d.device_total[i] - a.device_total[i]);
        }
        bool bcfl_weak = d.bcfl_total >= a.bcfl_total - kWeakSlack;
        bool bcfl_up = strictly_up(a.bcfl_total, b.bcfl_total);
        ok = ok && dev_up && bcfl_weak && bcfl_up;
        detail += fmt("%s T_mec min change %+.2e%s, T_bcfl %.6f->%.6f (D)%s, ->%.6f (Db)%s; ", tag, worst,
                      dev_up ? "" : " !", a.bcfl_total, d.bcfl_total, bcfl_weak ? "" : " !", b.bcfl_total,
                      bcfl_up ? "" : " !");
    };
    one("mg", [](const Scenario& s) { return Allocation{mg(s, mg_defaults(), "mg latency").allocation}; },
        identical_scenario());
    one("mc", [](const Scenario& s) { return Allocation{mc(s, mc_defaults(), "mc latency").allocation}; },
        heterogeneous_scenario());
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

Verdict c9_oracle() {
    // One N=2 scenario for both solvers; the equal-split solver needs identical devices.
    Scenario s = identical_scenario(2);
    const double F = s.server.cpu_max;
    auto t0 = std::chrono::steady_clock::now();
    auto fn = [&](const std::vector<double>& x) {
        oracle::Point p{{x[0], x[1]}, {x[3] * F, x[4] * F}, x[2], x[5] * F};
        return oracle::feasible(s, p) ? oracle::cost(s, p) : std::numeric_limits<double>::infinity();
    };
    auto g = oracle::nested_grid_search(fn, std::vector<double>(6, 0.0), std::vector<double>(6, 1.0), 8, 30, 0.6);
    double t = seconds_since(t0);
    double umg = total_cost(s, mg(s, mg_defaults(), "mg N=2").allocation);
    double umc = total_cost(s, mc(s, mc_defaults(), "mc N=2").allocation);
    double gmg = umg / g.value - 1, gmc = umc / g.value - 1;
    return {gmg <= kMgOracleGap && gmc <= kMcOracleGap && t < kOracleMaxSeconds,
            fmt("oracle=%.6f (%.2fs) mg=%.6f (%+.2f%%, max %.0f%%) mc=%.6f (%+.2f%%, max %.0f%%)", g.value, t, umg,
                100 * gmg, 100 * kMgOracleGap, umc, 100 * gmc, 100 * kMcOracleGap)};
}

Verdict c10_convexity() {
    Scenario s = identical_scenario();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const int n = s.size();
    int pd = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kConvexitySamples; ++k) {
        std::vector<double> wa(n + 1), wf(n + 1);
        double sa = 0, sf = 0;
        for (int i = 0; i <= n; ++i) {
            sa += wa[i] = u(rng);
            sf += wf[i] = u(rng);
        }
        HeterogeneousAllocation a;
        for (int i = 0; i < n; ++i) {
            a.alpha.push_back(0.9 * wa[i] / sa);
            a.f.push_back(0.9 * s.server.cpu_max * wf[i] / sf);
        }
        a.alpha_bcfl = 0.9 * wa[n] / sa;
        a.f_bcfl = 0.9 * s.server.cpu_max * wf[n] / sf;
        auto rep = numeric_hessian_check(s, a);
        pd += rep.min_eigenvalue > 0;
        worst = std::min(worst, rep.min_eigenvalue);
    }
    return {pd == kConvexitySamples, fmt("positive definite at %d/%d, min eigenvalue %.4g", pd, kConvexitySamples, worst)};
}

Verdict c11_feasibility() {
    int bad = 0;
    std::string first;
    for (const auto& c : g_converged) {
        auto rep = check_feasibility(c.scenario, c.allocation, kFeasTol);
        if (!feasible_on(rep, {1, 2, 3, 4, 5, 6}, kFeasTol)) {
            if (!bad++) first = fmt(" first failure: %s (worst violation %.3g)", c.label.c_str(), rep.worst_violation);
        }
    }
    return {bad == 0 && !g_converged.empty(),
            fmt("%zu converged solutions checked, %d infeasible%s", g_converged.size(), bad, first.c_str())};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict c12_determinism() {
    fs::path dir = fs::temp_directory_path() / "edgealloc_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::vector<ExperimentSpec> specs(4);
    specs[0].scenario = identical_scenario();
    specs[0].sweep = SweepAxis{"rho", {0.1, 0.5}};
    specs[1].scenario = heterogeneous_scenario();
    specs[1].solver = SolverKind::mc;
    specs[2].scenario = identical_scenario();
    specs[2].solver = SolverKind::random;
    specs[2].repetitions = 3;
    specs[3].scenario = heterogeneous_scenario();
    specs[3].solver = SolverKind::cadmm;
    int same = 0, total = 0;
    for (std::size_t e = 0; e < specs.size(); ++e) {
        std::string files[2][2];
        for (int run = 0; run < 2; ++run) {
            auto r = run_experiment(specs[e]);
            fs::path stem = dir / fmt("e%zu_run%d", e, run);
            emit_results(r.rows, stem.string() + ".csv");
            emit_traces(r, stem.string() + ".trace.jsonl");
            files[run][0] = slurp(stem.string() + ".csv");
            files[run][1] = slurp(stem.string() + ".trace.jsonl");
        }
        for (int k = 0; k < 2; ++k) {
            ++total;
            same += !files[0][k].empty() && files[0][k] == files[1][k];
        }
    }
    fs::remove_all(dir);
    return {same == total, fmt("%d/%d output files byte-identical across two runs", same, total)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Verdict()> check;
    };
    const std::vector<Criterion> criteria = {
        {"mg-convergence-envelope", c1_mg_envelope},
        {"mc-convergence-envelope", c2_mc_envelope},
        {"relative-speed", c3_relative_speed},
        {"baseline-dominance", c4_baselines},
        {"penalty-monotonicity", c5_penalty},
        {"device-count-trend", c6_device_count},
        {"data-size-allocation-trends", c7_data_trends},
        {"latency-trends", c8_latency_trends},
        {"small-instance-oracle", c9_oracle},
        {"convexity", c10_convexity},
        {"output-feasibility", c11_feasibility},
        {"determinism", c12_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("[%s] %02zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed ? 1 : 0;
}

#include "edgealloc/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace edgealloc {

namespace {

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

Scenario resolve_scenario(const ExperimentSpec& spec) {
    if (const auto* s = std::get_if<Scenario>(&spec.scenario)) return *s;
    return load_scenario(std::get<std::filesystem::path>(spec.scenario));
}

void check_sweep_value(const std::string& p, double v) {
    auto bad = [&](const char* why) {
        throw ValidationError("sweep value " + format_double(v) + " for '" + p + "' " + why);
    };
    if (!std::isfinite(v)) bad("is not finite");
    if (p == "rho" || p == "beta" || p == "psi" || p == "psi_prim" || p == "psi_dual" || p == "D_scale" ||
        p == "D_bcfl_scale" || p == "D_bcfl") {
        if (!(v > 0)) bad("must be positive");
    } else if (p == "N") {
        if (!(v >= 1) || !is_integer(v)) bad("must be a positive integer");
    } else if (p == "D_i") {
        if (!(v >= 0)) bad("must be non-negative");
    } else {
        throw ValidationError("unknown sweep parameter '" + p + "'");
    }
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += format_double(v[i]);
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

ResultRow failed_row(ResultRow row, const std::string& what) {
    row.status = "failed";
    row.error = what;
    return row;
}

void fill_row(ResultRow& row, const Scenario& s, const Allocation& alloc) {
    const auto het = expand(alloc, s.size());
    row.alpha = het.alpha;
    row.f = het.f;
    row.alpha_bcfl = het.alpha_bcfl;
    row.f_bcfl = het.f_bcfl;
    row.final_cost = total_cost(s, alloc);
    auto lat = task_latencies(s, alloc);
    row.device_latency = lat.device_total;
    row.bcfl_latency = lat.bcfl_total;
}

double parse_double(const std::string& s, const char* column) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double x = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ValidationError(std::string("results CSV: bad number '") + s + "' in column " + column);
    return x;
}

std::vector<double> split_list(const std::string& s, const char* column) {
    std::vector<double> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto semi = s.find(';', start);
        out.push_back(parse_double(s.substr(start, semi - start), column));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    return out;
}

/// Splits CSV text into records, honouring quoted fields.
std::vector<std::vector<std::string>> csv_records(const std::string& text) {
    std::vector<std::vector<std::string>> recs;
    std::vector<std::string> cur;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            cur.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                cur.push_back(std::move(field));
                recs.push_back(std::move(cur));
            }
            cur.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw ValidationError("results CSV: unterminated quoted field");
    if (any || !field.empty()) {
        cur.push_back(std::move(field));
        recs.push_back(std::move(cur));
    }
    return recs;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

const char* to_string(SolverKind k) {
    switch (k) {
        case SolverKind::mg: return "mg";
        case SolverKind::mc: return "mc";
        case SolverKind::random: return "random";
        case SolverKind::fixed: return "fixed";
        case SolverKind::gadmm: return "gadmm";
        case SolverKind::cadmm: return "cadmm";
    }
    return "?";
}

SolverKind parse_solver_kind(const std::string& s) {
    for (auto k : {SolverKind::mg, SolverKind::mc, SolverKind::random, SolverKind::fixed, SolverKind::gadmm,
                   SolverKind::cadmm})
        if (s == to_string(k)) return k;
    throw ValidationError("unknown solver '" + s + "' (expected mg, mc, random, fixed, gadmm or cadmm)");
}

void ExperimentSpec::validate() const {
    if (repetitions < 1) throw ValidationError("repetitions must be at least 1");
    if (baseline_iterations < 1) throw ValidationError("baseline iterations must be at least 1");
    mg.validate();
    mc.validate();
    if (sweep) {
        if (sweep->values.empty()) throw ValidationError("sweep over '" + sweep->parameter + "' has no values");
        for (double v : sweep->values) check_sweep_value(sweep->parameter, v);
    }
}

void apply_sweep(const std::string& p, double v, Scenario& s, MgConfig& mg, McConfig& mc) {
    check_sweep_value(p, v);
    if (p == "rho") {
        mg.rho = mc.rho = v;
    } else if (p == "beta") {
        mg.beta = mc.beta = v;
    } else if (p == "psi") {
        mg.psi = mc.psi = v;
    } else if (p == "psi_prim") {
        mc.psi_prim = v;
    } else if (p == "psi_dual") {
        mc.psi_dual = v;
    } else if (p == "N") {
        const auto n = static_cast<std::size_t>(v);
        if (n <= s.devices.size()) {
            s.devices.resize(n);
        } else if (s.homogeneous()) {
            s.devices.resize(n, s.devices.front());
        } else {
            throw ValidationError("cannot grow a scenario with distinct devices to N=" + std::to_string(n));
        }
    } else if (p == "D_scale") {
        for (auto& d : s.devices) d.data_size *= v;
    } else if (p == "D_bcfl_scale") {
        s.bcfl.data_size *= v;
        s.bcfl.tx_data_size *= v;
    } else if (p == "D_i") {
        for (auto& d : s.devices) d.data_size = v;
    } else if (p == "D_bcfl") {
        s.bcfl.tx_data_size *= v / s.bcfl.data_size;
        s.bcfl.data_size = v;
    }
}

const std::vector<std::string>& result_columns() {
    static const std::vector<std::string> cols = {
        "experiment_id", "sweep_parameter", "sweep_value", "repetition", "seed",   "solver",
        "status",        "error",           "iterations_used", "converged", "final_cost", "alpha_bcfl",
        "f_bcfl",        "alpha",           "f",           "device_latency", "bcfl_latency"};
    return cols;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const Scenario base = resolve_scenario(spec);
    const std::vector<double> values = spec.sweep ? spec.sweep->values : std::vector<double>{0.0};

    ExperimentResult out;
    for (double value : values) {
        for (int rep = 0; rep < spec.repetitions; ++rep) {
            ResultRow row;
            row.experiment_id = spec.id;
            row.sweep_parameter = spec.sweep ? spec.sweep->parameter : "none";
            row.sweep_value = value;
            row.repetition = rep;
            row.seed = spec.seed + static_cast<std::uint64_t>(rep);
            row.solver = to_string(spec.solver);
            row.status = "ok";

            Scenario s = base;
            MgConfig mg = spec.mg;
            McConfig mc = spec.mc;
            try {
                if (spec.sweep) apply_sweep(spec.sweep->parameter, value, s, mg, mc);
                SolverTrace trace;
                Allocation alloc;
                switch (spec.solver) {
                    case SolverKind::mg: {
                        auto r = solve_mg(s, mg);
                        trace = std::move(r.trace);
                        alloc = r.allocation;
                        break;
                    }
                    case SolverKind::mc: {
                        auto r = solve_mc(s, mc);
                        trace = std::move(r.trace);
                        alloc = r.allocation;
                        break;
                    }
                    default: {
                        BaselineOptions o;
                        o.shape = spec.shape;
                        o.mg = mg;
                        o.mc = mc;
                        o.seed = row.seed;
                        o.iterations = spec.baseline_iterations;
                        BaselineKind kind = RandomBaseline{};
                        if (spec.solver == SolverKind::fixed) kind = FixedBaseline{};
                        if (spec.solver == SolverKind::gadmm)
                            kind = GAdmmPinned{spec.pinned_alpha_bcfl, spec.pinned_f_bcfl_fraction};
                        if (spec.solver == SolverKind::cadmm)
                            kind = CAdmmPinned{spec.pinned_alpha_bcfl, spec.pinned_f_bcfl_fraction};
                        auto r = run_baseline(kind, s, o);
                        trace = std::move(r.trace);
                        alloc = std::move(r.allocation);
                    }
                }
                row.iterations_used = trace.iterations_used;
                row.converged = trace.converged;
                fill_row(row, s, alloc);
                out.rows.push_back(std::move(row));
                out.traces.push_back(std::move(trace));
                out.allocations.push_back(std::move(alloc));
            } catch (const Error& e) {
                out.rows.push_back(failed_row(std::move(row), e.what()));
                out.traces.emplace_back();
                out.allocations.emplace_back();
            }
        }
    }
    return out;
}

void emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    if (rows.empty()) throw ValidationError("no result rows to emit");
    std::ostringstream o;
    const auto& cols = result_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) o << (i ? "," : "") << cols[i];
    o << '\n';
    for (const auto& r : rows) {
        o << csv_field(r.experiment_id) << ',' << csv_field(r.sweep_parameter) << ',' << format_double(r.sweep_value)
          << ',' << r.repetition << ',' << r.seed << ',' << csv_field(r.solver) << ',' << csv_field(r.status) << ','
          << csv_field(r.error) << ',' << r.iterations_used << ',' << (r.converged ? "true" : "false") << ','
          << format_double(r.final_cost) << ',' << format_double(r.alpha_bcfl) << ',' << format_double(r.f_bcfl)
          << ',' << join(r.alpha) << ',' << join(r.f) << ',' << join(r.device_latency) << ','
          << format_double(r.bcfl_latency) << '\n';
    }
    write_file(path, o.str());
}

void emit_traces(const ExperimentResult& result, const std::filesystem::path& path) {
    if (result.rows.empty()) throw ValidationError("no result rows to emit");
    using json = nlohmann::ordered_json;
    std::ostringstream o;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& row = result.rows[i];
        const auto& t = result.traces[i];
        for (const auto& rec : t.records) {
            json j;
            j["experiment_id"] = row.experiment_id;
            j["sweep_parameter"] = row.sweep_parameter;
            j["sweep_value"] = row.sweep_value;
            j["repetition"] = row.repetition;
            j["k"] = rec.k;
            j["alpha"] = rec.alpha;
            j["f"] = rec.f;
            j["alpha_bcfl"] = rec.alpha_bcfl;
            j["f_bcfl"] = rec.f_bcfl;
            json m = json::object();
            for (std::size_t k = 0; k < rec.multipliers.size() && k < t.multiplier_names.size(); ++k)
                m[t.multiplier_names[k]] = rec.multipliers[k];
            j["multipliers"] = m;
            j["objective"] = rec.objective;
            json res = json::object();
            for (std::size_t k = 0; k < rec.residuals.size() && k < t.residual_names.size(); ++k)
                res[t.residual_names[k]] = rec.residuals[k];
            j["residuals"] = res;
            o << j.dump() << '\n';
        }
    }
    write_file(path, o.str());
}

std::vector<ResultRow> parse_results_csv(const std::string& text) {
    auto recs = csv_records(text);
    if (recs.empty()) throw ValidationError("results CSV: missing header");
    if (recs.front() != result_columns()) throw ValidationError("results CSV: header does not match the schema");
    std::vector<ResultRow> rows;
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const auto& f = recs[i];
        if (f.size() != result_columns().size())
            throw ValidationError("results CSV: record " + std::to_string(i) + " has " + std::to_string(f.size()) +
                                  " fields");
        ResultRow r;
        r.experiment_id = f[0];
        r.sweep_parameter = f[1];
        r.sweep_value = parse_double(f[2], "sweep_value");
        r.repetition = std::stoi(f[3]);
        r.seed = std::stoull(f[4]);
        r.solver = f[5];
        r.status = f[6];
        r.error = f[7];
        r.iterations_used = std::stoi(f[8]);
        if (f[9] != "true" && f[9] != "false") throw ValidationError("results CSV: converged must be true/false");
        r.converged = f[9] == "true";
        r.final_cost = parse_double(f[10], "final_cost");
        r.alpha_bcfl = parse_double(f[11], "alpha_bcfl");
        r.f_bcfl = parse_double(f[12], "f_bcfl");
        r.alpha = split_list(f[13], "alpha");
        r.f = split_list(f[14], "f");
        r.device_latency = split_list(f[15], "device_latency");
        r.bcfl_latency = parse_double(f[16], "bcfl_latency");
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_results_csv(buf.str());
}

std::vector<LatencyRow> latency_report(const Scenario& s, const Allocation& alloc) {
    auto rep = check_feasibility(s, alloc);
    if (!feasible_on(rep, {3, 4, 6}, 1e-3))
        throw InfeasibleAllocation("latency report needs an allocation inside the box and the budgets");
    auto lat = task_latencies(s, alloc);
    std::vector<LatencyRow> rows;
    for (int i = 0; i < s.size(); ++i) {
        double budget = s.devices[i].time_budget;
        rows.push_back({"device" + std::to_string(i + 1), lat.device_comm[i], lat.device_comp[i], lat.device_total[i],
                        budget, budget - lat.device_total[i]});
    }
    rows.push_back({"bcfl", lat.bcfl_comm, lat.bcfl_comp, lat.bcfl_total, s.bcfl.time_budget,
                    s.bcfl.time_budget - lat.bcfl_total});
    return rows;
}

void emit_latency(const std::vector<LatencyRow>& rows, const std::filesystem::path& path) {
    if (rows.empty()) throw ValidationError("no latency rows to emit");
    std::ostringstream o;
    o << "task,t_comm,t_comp,total,budget,slack\n";
    for (const auto& r : rows)
        o << r.task << ',' << format_double(r.t_comm) << ',' << format_double(r.t_comp) << ','
          << format_double(r.total) << ',' << format_double(r.budget) << ',' << format_double(r.slack) << '\n';
    write_file(path, o.str());
}

}  // namespace edgealloc

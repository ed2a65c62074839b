#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "edgealloc/harness.hpp"

namespace edgealloc {

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line;
};

using Section = std::map<std::string, Entry>;

class Reader {
public:
    Reader(const std::string& text, std::string origin) : origin_(std::move(origin)) {
        std::istringstream in(text);
        std::string raw;
        std::string section;  // "" is the top level
        sections_[section];
        int lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            auto hash = raw.find_first_of("#;");
            std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(lineno, "", "unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty()) fail(lineno, "", "empty section name");
                if (sections_.count(section)) fail(lineno, "", "duplicate section [" + section + "]");
                sections_[section];
                section_lines_[section] = lineno;
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos) fail(lineno, "", "expected 'key = value'");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) fail(lineno, "", "missing key");
            if (value.empty()) fail(lineno, key, "missing value");
            auto& sec = sections_[section];
            if (sec.count(key)) fail(lineno, key, "duplicate key");
            sec[key] = {value, lineno};
        }
    }

    const std::map<std::string, Section>& sections() const { return sections_; }
    int section_line(const std::string& s) const {
        auto it = section_lines_.find(s);
        return it == section_lines_.end() ? 0 : it->second;
    }

    [[noreturn]] void fail(int line, const std::string& field, const std::string& what) const {
        throw ParseError(origin_, line, field, what);
    }

    double number(const Section& sec, const std::string& key, double fallback, bool required = false) {
        auto it = sec.find(key);
        if (it == sec.end()) {
            if (required) fail(0, key, "required field is missing");
            return fallback;
        }
        const std::string& v = it->second.value;
        double x = 0.0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
            fail(it->second.line, key, "'" + v + "' is not a finite number");
        return x;
    }

    std::string text(const Section& sec, const std::string& key, const std::string& fallback) {
        auto it = sec.find(key);
        return it == sec.end() ? fallback : it->second.value;
    }

    void only_keys(const std::string& name, const Section& sec, std::initializer_list<const char*> allowed) const {
        for (const auto& [k, e] : sec) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) fail(e.line, k, "unknown field in " + (name.empty() ? std::string("top level") : "[" + name + "]"));
        }
    }

    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::map<std::string, Section> sections_;
    std::map<std::string, int> section_lines_;
};

const std::initializer_list<const char*> kDeviceKeys = {"D_i", "T_i", "P_i", "G_i", "d_i"};

DeviceTask read_device(Reader& r, const std::string& name, const Section& sec, DeviceTask base) {
    r.only_keys(name, sec, kDeviceKeys);
    base.data_size = r.number(sec, "D_i", base.data_size);
    base.time_budget = r.number(sec, "T_i", base.time_budget);
    base.tx_power = r.number(sec, "P_i", base.tx_power);
    base.channel_gain = r.number(sec, "G_i", base.channel_gain);
    base.cpu_density = r.number(sec, "d_i", base.cpu_density);
    return base;
}

int parse_count(Reader& r, const Section& top) {
    auto it = top.find("N");
    if (it == top.end()) r.fail(0, "N", "required field is missing");
    const std::string& v = it->second.value;
    int n = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc() || p != v.data() + v.size() || n < 1)
        r.fail(it->second.line, "N", "'" + v + "' is not a positive integer");
    return n;
}

}  // namespace

ScenarioFile parse_scenario_text(const std::string& text, const std::string& origin) {
    Reader r(text, origin);
    const auto& secs = r.sections();
    static const Section empty;
    auto get = [&](const std::string& name) -> const Section& {
        auto it = secs.find(name);
        return it == secs.end() ? empty : it->second;
    };

    const Section& top = get("");
    r.only_keys("", top, {"N"});
    const int n = parse_count(r, top);

    for (const auto& [name, sec] : secs) {
        if (name.empty() || name == "server" || name == "bcfl" || name == "devices" || name == "solver") continue;
        if (name.rfind("device.", 0) == 0) {
            const std::string idx = name.substr(7);
            int i = 0;
            auto [p, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), i);
            if (ec != std::errc() || p != idx.data() + idx.size() || i < 1 || i > n)
                r.fail(r.section_line(name), "", "[" + name + "] must name a device index in 1.." + std::to_string(n));
            continue;
        }
        r.fail(r.section_line(name), "", "unknown section [" + name + "]");
    }

    ScenarioFile out;
    Scenario& s = out.scenario;

    const Section& server = get("server");
    r.only_keys("server", server, {"B", "F", "D", "delta", "gamma"});
    s.server.bandwidth = r.number(server, "B", 100.0);
    s.server.cpu_max = r.number(server, "F", 0.0, true);
    s.server.storage = r.number(server, "D", 1000.0);
    s.server.noise = r.number(server, "delta", 0.0, true);
    s.server.cpu_energy_coeff = r.number(server, "gamma", 0.0, true);

    const Section& bcfl = get("bcfl");
    r.only_keys("bcfl", bcfl, {"D_bcfl", "Dhat_bcfl", "T_bcfl", "P_bcfl", "G_bcfl", "d_bcfl"});
    s.bcfl.data_size = r.number(bcfl, "D_bcfl", 0.0, true);
    s.bcfl.tx_data_size = r.number(bcfl, "Dhat_bcfl", 0.5 * s.bcfl.data_size);
    s.bcfl.time_budget = r.number(bcfl, "T_bcfl", 0.0, true);
    s.bcfl.tx_power = r.number(bcfl, "P_bcfl", 0.0, true);
    s.bcfl.channel_gain = r.number(bcfl, "G_bcfl", 0.0, true);
    s.bcfl.cpu_density = r.number(bcfl, "d_bcfl", 0.0, true);

    const DeviceTask defaults = read_device(r, "devices", get("devices"), DeviceTask{});
    for (int i = 1; i <= n; ++i) {
        const std::string name = "device." + std::to_string(i);
        s.devices.push_back(read_device(r, name, get(name), defaults));
    }
    // Data size and deadline have no sensible default: each device needs them from [devices] or its own section.
    for (const char* key : {"D_i", "T_i"}) {
        if (get("devices").count(key)) continue;
        for (int i = 1; i <= n; ++i)
            if (!get("device." + std::to_string(i)).count(key))
                r.fail(0, key, "required field is missing for device " + std::to_string(i));
    }

    const Section& solver = get("solver");
    r.only_keys("solver", solver,
                {"rho", "beta", "psi", "psi_prim", "psi_dual", "max_iters", "multiplier_init", "dual_sign",
                 "pinned_alpha_bcfl", "pinned_f_bcfl_fraction"});
    out.mg.rho = out.mc.rho = r.number(solver, "rho", 0.5);
    out.mg.beta = r.number(solver, "beta", 0.5);
    out.mc.beta = r.number(solver, "beta", 1.0);
    out.mg.psi = out.mc.psi = r.number(solver, "psi", 1e-3);
    out.mc.psi_prim = r.number(solver, "psi_prim", 1e-3);
    out.mc.psi_dual = r.number(solver, "psi_dual", 1e-3);
    double k = r.number(solver, "max_iters", 1000);
    if (k < 1 || k != static_cast<int>(k)) r.fail(solver.at("max_iters").line, "max_iters", "must be a positive integer");
    out.mg.max_iters = out.mc.max_iters = static_cast<int>(k);
    out.mg.multiplier_init = out.mc.multiplier_init = r.number(solver, "multiplier_init", 1.0);
    try {
        out.mg.dual_sign = out.mc.dual_sign = parse_dual_sign(r.text(solver, "dual_sign", "standard"));
    } catch (const ValidationError& e) {
        r.fail(solver.at("dual_sign").line, "dual_sign", e.what());
    }
    out.pinned_alpha_bcfl = r.number(solver, "pinned_alpha_bcfl", 0.3);
    out.pinned_f_bcfl_fraction = r.number(solver, "pinned_f_bcfl_fraction", 0.3);

    try {
        s.validate();
        out.mg.validate();
        out.mc.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    try {
        s.require_storage();
    } catch (const InfeasibleScenario& e) {
        throw InfeasibleScenario(origin + ": " + e.what());
    }
    return out;
}

ScenarioFile load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path.string());
}

Scenario load_scenario(const std::filesystem::path& path) { return load_scenario_file(path).scenario; }

}  // namespace edgealloc

#include "spincool/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "spincool/constants.hpp"
#include "spincool/errors.hpp"

namespace spincool {

namespace {

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0; // 0 for CLI overrides
};

std::string location(const Entry& e) {
    if (e.line == 0) return "override '" + e.section + "." + e.key + "'";
    return "line " + std::to_string(e.line);
}

std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
}

std::vector<Entry> tokenize(const std::string& text) {
    std::vector<Entry> entries;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + line + "'");
        Entry e;
        e.section = section;
        e.key = trim(line.substr(0, eq));
        e.value = trim(line.substr(eq + 1));
        e.line = line_no;
        if (e.section.empty())
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": key '" + e.key + "' appears before any [section]");
        if (e.key.empty())
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": empty key");
        entries.push_back(std::move(e));
    }
    return entries;
}

double parse_double(const Entry& e) {
    try {
        std::size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (used != e.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config " + location(e) + ": '" + e.value +
                              "' is not a number (key '" + e.key + "')");
    }
}

std::int64_t parse_integer(const Entry& e) {
    const double v = parse_double(e);
    if (!(std::abs(v) < 9.0e18) || v != std::floor(v))
        throw ValidationError("config " + location(e) + ": '" + e.value +
                              "' is not an integer (key '" + e.key + "')");
    return static_cast<std::int64_t>(v);
}

std::vector<double> parse_double_list(const Entry& e) {
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string item;
    while (std::getline(in, item, ',')) {
        Entry sub = e;
        sub.value = trim(item);
        out.push_back(parse_double(sub));
    }
    if (out.empty())
        throw ValidationError("config " + location(e) + ": empty list (key '" +
                              e.key + "')");
    return out;
}

std::vector<std::int64_t> parse_integer_list(const Entry& e) {
    std::vector<std::int64_t> out;
    for (double v : parse_double_list(e)) {
        if (v != std::floor(v) || !(std::abs(v) < 9.0e18))
            throw ValidationError("config " + location(e) +
                                  ": list entries must be integers (key '" +
                                  e.key + "')");
        out.push_back(static_cast<std::int64_t>(v));
    }
    return out;
}

bool parse_bool_spacing(const Entry& e) {
    if (e.value == "linear") return false;
    if (e.value == "log") return true;
    throw ValidationError("config " + location(e) +
                          ": time spacing must be 'linear' or 'log', got '" +
                          e.value + "'");
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

std::vector<double> TimeGridSpec::build(double auto_stop) const {
    const double t1 = stop > 0.0 ? stop : auto_stop;
    if (!(t1 > start))
        throw ValidationError("time grid: stop must exceed start");
    if (count < 2) throw ValidationError("time grid: need at least 2 points");
    std::vector<double> grid;
    grid.reserve(count);
    if (log_spacing) {
        const double lo = start > 0.0 ? start : t1 / static_cast<double>(count * 100);
        const double ratio = std::pow(t1 / lo, 1.0 / static_cast<double>(count - 1));
        double v = lo;
        for (std::size_t i = 0; i < count; ++i, v *= ratio) grid.push_back(v);
        grid.back() = t1;
    } else {
        for (std::size_t i = 0; i < count; ++i)
            grid.push_back(start + (t1 - start) * static_cast<double>(i + 1) /
                                        static_cast<double>(count));
    }
    return grid;
}

double RunConfig::effective_nbar() const {
    if (temperature_k >= 0.0)
        return thermal_occupation(constants::two_pi * omega_c_hz, temperature_k);
    return nbar;
}

PhysicalParams RunConfig::physical() const {
    return params_from_linear(omega_c_hz, omega_s_hz, rabi_hz, g_hz, kappa_hz,
                              effective_nbar(), n_spins, j_subspace);
}

RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides) {
    std::vector<Entry> entries = tokenize(text);
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        const auto dot = ov.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw ValidationError("override '" + ov +
                                  "' must look like section.key=value");
        Entry e;
        e.section = trim(ov.substr(0, dot));
        e.key = trim(ov.substr(dot + 1, eq - dot - 1));
        e.value = trim(ov.substr(eq + 1));
        e.line = 0;
        std::erase_if(entries, [&](const Entry& x) {
            return x.section == e.section && x.key == e.key;
        });
        entries.push_back(std::move(e));
    }

    RunConfig cfg;
    std::set<std::string> seen;
    bool nbar_given = false, temperature_given = false;

    for (const Entry& e : entries) {
        const std::string id = e.section + "." + e.key;
        if (e.line != 0 && !seen.insert(id).second)
            throw ValidationError("config " + location(e) + ": duplicate key '" +
                                  id + "'");
        if (e.section == "model") {
            if (e.key == "omega_c_hz") cfg.omega_c_hz = parse_double(e);
            else if (e.key == "omega_s_hz") cfg.omega_s_hz = parse_double(e);
            else if (e.key == "rabi_hz") cfg.rabi_hz = parse_double(e);
            else if (e.key == "g_hz") cfg.g_hz = parse_double(e);
            else if (e.key == "kappa_hz") cfg.kappa_hz = parse_double(e);
            else if (e.key == "nbar") { cfg.nbar = parse_double(e); nbar_given = true; }
            else if (e.key == "temperature_k") {
                cfg.temperature_k = parse_double(e);
                temperature_given = true;
            }
            else if (e.key == "n_spins") cfg.n_spins = parse_integer(e);
            else if (e.key == "j_subspace") cfg.j_subspace = parse_double(e);
            else goto unknown;
        } else if (e.section == "markov_engine") {
            if (e.key == "max_dimension")
                cfg.max_dimension = static_cast<std::size_t>(parse_integer(e));
            else goto unknown;
        } else if (e.section == "lindblad_engine") {
            if (e.key == "n_max") cfg.n_max = static_cast<int>(parse_integer(e));
            else if (e.key == "leakage_threshold") cfg.leakage_threshold = parse_double(e);
            else if (e.key == "dense_dim_limit")
                cfg.dense_dim_limit = static_cast<int>(parse_integer(e));
            else goto unknown;
        } else if (e.section == "analysis") {
            if (e.key == "n_spins_list") cfg.n_spins_list = parse_integer_list(e);
            else if (e.key == "nbar_list") cfg.nbar_list = parse_double_list(e);
            else if (e.key == "kappa_ratio_list") cfg.kappa_ratio_list = parse_double_list(e);
            else if (e.key == "grid_extent") cfg.grid_extent = parse_double(e);
            else if (e.key == "grid_points")
                cfg.grid_points = static_cast<std::size_t>(parse_integer(e));
            else if (e.key == "fit_window_fraction") cfg.fit_window_fraction = parse_double(e);
            else if (e.key == "noise_floor") cfg.noise_floor = parse_double(e);
            else if (e.key == "agreement_threshold") cfg.agreement_threshold = parse_double(e);
            else goto unknown;
        } else if (e.section == "cli_io") {
            if (e.key == "engine") {
                if (e.value != "markov" && e.value != "full" && e.value != "both")
                    throw ValidationError("config " + location(e) +
                                          ": engine must be markov, full or both");
                cfg.engine = e.value;
            }
            else if (e.key == "time_start") cfg.time_grid.start = parse_double(e);
            else if (e.key == "time_stop") cfg.time_grid.stop = parse_double(e);
            else if (e.key == "time_count")
                cfg.time_grid.count = static_cast<std::size_t>(parse_integer(e));
            else if (e.key == "time_spacing") cfg.time_grid.log_spacing = parse_bool_spacing(e);
            else if (e.key == "out_dir") cfg.out_dir = e.value;
            else if (e.key == "workers") cfg.workers = static_cast<int>(parse_integer(e));
            else goto unknown;
        } else {
            throw ValidationError("config " + location(e) + ": unknown section [" +
                                  e.section + "]");
        }
        continue;
    unknown:
        throw ValidationError("config " + location(e) + ": unknown key '" + e.key +
                              "' in section [" + e.section + "]");
    }

    if (nbar_given && temperature_given)
        throw ValidationError(
            "config: model.nbar and model.temperature_k are mutually exclusive");

    std::vector<std::string> missing;
    const auto require = [&](bool present, const char* name) {
        if (!present) missing.emplace_back(name);
    };
    require(cfg.omega_c_hz > 0.0, "model.omega_c_hz");
    require(cfg.omega_s_hz > 0.0, "model.omega_s_hz");
    require(cfg.rabi_hz > 0.0, "model.rabi_hz");
    require(cfg.g_hz > 0.0, "model.g_hz");
    require(cfg.kappa_hz > 0.0, "model.kappa_hz");
    require(cfg.n_spins > 0, "model.n_spins");
    if (!missing.empty()) {
        std::string msg = "config: missing required key(s):";
        for (const std::string& m : missing) msg += " " + m;
        throw ValidationError(msg);
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config: cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "[model]\n";
    out << "omega_c_hz = " << format_double(c.omega_c_hz) << "\n";
    out << "omega_s_hz = " << format_double(c.omega_s_hz) << "\n";
    out << "rabi_hz = " << format_double(c.rabi_hz) << "\n";
    out << "g_hz = " << format_double(c.g_hz) << "\n";
    out << "kappa_hz = " << format_double(c.kappa_hz) << "\n";
    if (c.temperature_k >= 0.0)
        out << "temperature_k = " << format_double(c.temperature_k) << "\n";
    else
        out << "nbar = " << format_double(c.nbar) << "\n";
    out << "n_spins = " << c.n_spins << "\n";
    if (c.j_subspace >= 0.0)
        out << "j_subspace = " << format_double(c.j_subspace) << "\n";
    out << "\n[markov_engine]\n";
    out << "max_dimension = " << c.max_dimension << "\n";
    out << "\n[lindblad_engine]\n";
    out << "n_max = " << c.n_max << "\n";
    out << "leakage_threshold = " << format_double(c.leakage_threshold) << "\n";
    out << "dense_dim_limit = " << c.dense_dim_limit << "\n";
    out << "\n[analysis]\n";
    const auto int_list = [&](const std::vector<std::int64_t>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + std::to_string(v[i]);
        return s;
    };
    const auto dbl_list = [&](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + format_double(v[i]);
        return s;
    };
    if (!c.n_spins_list.empty())
        out << "n_spins_list = " << int_list(c.n_spins_list) << "\n";
    if (!c.nbar_list.empty()) out << "nbar_list = " << dbl_list(c.nbar_list) << "\n";
    if (!c.kappa_ratio_list.empty())
        out << "kappa_ratio_list = " << dbl_list(c.kappa_ratio_list) << "\n";
    out << "grid_extent = " << format_double(c.grid_extent) << "\n";
    out << "grid_points = " << c.grid_points << "\n";
    out << "fit_window_fraction = " << format_double(c.fit_window_fraction) << "\n";
    out << "noise_floor = " << format_double(c.noise_floor) << "\n";
    out << "agreement_threshold = " << format_double(c.agreement_threshold) << "\n";
    out << "\n[cli_io]\n";
    out << "engine = " << c.engine << "\n";
    out << "time_start = " << format_double(c.time_grid.start) << "\n";
    out << "time_stop = " << format_double(c.time_grid.stop) << "\n";
    out << "time_count = " << c.time_grid.count << "\n";
    out << "time_spacing = " << (c.time_grid.log_spacing ? "log" : "linear") << "\n";
    out << "out_dir = " << c.out_dir << "\n";
    out << "workers = " << c.workers << "\n";
    return out.str();
}

} // namespace spincool

#include "ahspec/runconfig.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ahspec {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: " + v);
    }
}

long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key '" + key + "': not a boolean: " + v);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    char buf[40];
    for (size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        s += (i ? "," : "") + std::string(buf);
    }
    return s;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

} // namespace

void set_config_key(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "model") {
        c.model = value;
    } else if (key == "t_min") {
        c.t_min = parse_double(key, value);
    } else if (key == "t_max") {
        c.t_max = parse_double(key, value);
    } else if (key == "n_t") {
        c.n_t = static_cast<int>(parse_int(key, value));
    } else if (key == "n_theta") {
        c.n_theta = static_cast<int>(parse_int(key, value));
    } else if (key == "m_max") {
        c.m_max = static_cast<int>(parse_int(key, value));
    } else if (key == "perturb_center") {
        c.perturb_center = parse_double(key, value);
    } else if (key == "perturb_width") {
        c.perturb_width = parse_double(key, value);
    } else if (key == "perturb_amplitude") {
        c.perturb_amplitude = parse_double(key, value);
    } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "only") {
        c.only = value;
    } else if (key == "out") {
        c.out = value;
    } else if (key == "grid_ladder") {
        c.grid_ladder.clear();
        for (const auto& s : split_list(value))
            c.grid_ladder.push_back(static_cast<int>(parse_int(key, s)));
    } else if (key == "perturbed_suite") {
        c.perturbed_suite = parse_bool(key, value);
    } else if (key == "tol_scale") {
        c.tol_scale = parse_double(key, value);
    } else if (key == "lambdas") {
        c.lambdas.clear();
        for (const auto& s : split_list(value)) c.lambdas.push_back(parse_double(key, s));
    } else if (key == "radii") {
        c.radii.clear();
        for (const auto& s : split_list(value)) c.radii.push_back(parse_double(key, s));
    } else if (key == "count") {
        c.count = static_cast<int>(parse_int(key, value));
    } else if (key == "n_lo") {
        c.n_lo = static_cast<int>(parse_int(key, value));
    } else if (key == "n_hi") {
        c.n_hi = static_cast<int>(parse_int(key, value));
    } else if (key == "with_scan") {
        c.with_scan = parse_bool(key, value);
    } else {
        throw ConfigError("unknown config key: " + key);
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        set_config_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

void validate_run_config(const RunConfig& c) {
    if (c.model != "disk" && c.model != "perturbed")
        throw ConfigError("model must be 'disk' or 'perturbed', got '" + c.model + "'");
    if (!(c.t_min > 0.0) || !(c.t_max > c.t_min))
        throw ConfigError("need 0 < t_min < t_max");
    if (c.n_t < 16) throw ConfigError("n_t must be at least 16");
    if (c.n_theta < 4) throw ConfigError("n_theta must be at least 4");
    if (c.m_max < 0 || 2 * c.m_max >= c.n_theta)
        throw ConfigError("need 0 <= m_max < n_theta / 2");
    if (c.model == "perturbed" && !(c.perturb_width > 0.0))
        throw ConfigError("perturb_width must be positive");
    if (c.grid_ladder.empty()) throw ConfigError("grid_ladder must not be empty");
    for (size_t i = 0; i < c.grid_ladder.size(); ++i) {
        if (c.grid_ladder[i] < 16) throw ConfigError("grid_ladder entries must be >= 16");
        if (i > 0 && c.grid_ladder[i] <= c.grid_ladder[i - 1])
            throw ConfigError("grid_ladder must be strictly increasing");
    }
    if (!(c.tol_scale > 0.0)) throw ConfigError("tol_scale must be positive");
    if (c.lambdas.empty()) throw ConfigError("lambdas must not be empty");
    if (c.radii.empty()) throw ConfigError("radii must not be empty");
    for (double r : c.radii)
        if (!(r > 0.0)) throw ConfigError("radii must be positive");
    if (c.count < 1) throw ConfigError("count must be positive");
    if (c.n_lo < 1 || c.n_hi < c.n_lo)
        throw ConfigError("need 1 <= n_lo <= n_hi");
    if (4 * c.n_hi + 2 > c.n_theta)
        throw ConfigError("n_hi too large for the theta grid (need n_theta >= 4 n_hi + 2)");
    if (c.out.empty()) throw ConfigError("output directory must not be empty");
}

std::string config_snapshot(const RunConfig& c) {
    std::ostringstream out;
    char buf[40];
    auto num = [&buf](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    out << "count = " << c.count << "\n";
    out << "grid_ladder = " << join(c.grid_ladder) << "\n";
    out << "lambdas = " << join(c.lambdas) << "\n";
    out << "m_max = " << c.m_max << "\n";
    out << "model = " << c.model << "\n";
    out << "n_hi = " << c.n_hi << "\n";
    out << "n_lo = " << c.n_lo << "\n";
    out << "n_t = " << c.n_t << "\n";
    out << "n_theta = " << c.n_theta << "\n";
    out << "only = " << c.only << "\n";
    out << "out = " << c.out << "\n";
    out << "perturb_amplitude = " << num(c.perturb_amplitude) << "\n";
    out << "perturb_center = " << num(c.perturb_center) << "\n";
    out << "perturb_width = " << num(c.perturb_width) << "\n";
    out << "perturbed_suite = " << (c.perturbed_suite ? "true" : "false") << "\n";
    out << "radii = " << join(c.radii) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "t_max = " << num(c.t_max) << "\n";
    out << "t_min = " << num(c.t_min) << "\n";
    out << "tol_scale = " << num(c.tol_scale) << "\n";
    out << "with_scan = " << (c.with_scan ? "true" : "false") << "\n";
    return out.str();
}

SurfaceModel build_model(const RunConfig& c) {
    validate_run_config(c);
    SurfaceModel disk = build_hyperbolic_disk(c.t_min, c.t_max, c.n_t, c.n_theta);
    if (c.model == "disk") return disk;
    const MollifierBump u{c.perturb_center, c.perturb_width, c.perturb_amplitude};
    return build_conformal_perturbation(disk, u);
}

LadderSetup ladder_setup(const RunConfig& c) {
    LadderSetup s;
    s.t_min = c.t_min;
    s.t_max = c.t_max;
    s.n_theta = c.n_theta;
    s.rungs = c.grid_ladder;
    s.perturbed = c.perturbed_suite;
    s.tol_scale = c.tol_scale;
    return s;
}

SpectralConfig spectral_config(const RunConfig& c) {
    SpectralConfig s;
    s.m_max = c.m_max;
    s.count = c.count;
    s.n_lo = c.n_lo;
    s.n_hi = c.n_hi;
    s.with_scan = c.with_scan;
    s.scan_lambdas = c.lambdas;
    s.scan_Rs = c.radii;
    if (c.model == "perturbed")
        s.perturbation = MollifierBump{c.perturb_center, c.perturb_width,
                                       c.perturb_amplitude};
    return s;
}

} // namespace ahspec

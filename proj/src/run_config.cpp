#include "qtherm/run_config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <thread>

namespace qtherm {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

double parse_double(const std::string& key, const std::string& token) {
    const std::string t = trim(token);
    if (t.empty()) throw ConfigError("config field '" + key + "': empty value");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) {
        throw ConfigError("config field '" + key + "': cannot parse '" + t + "' as a number");
    }
    return v;
}

double parse_positive(const std::string& key, const std::string& token) {
    const double v = parse_double(key, token);
    if (!(v > 0.0)) throw ConfigError("config field '" + key + "': must be positive, got '" + token + "'");
    return v;
}

double parse_non_negative(const std::string& key, const std::string& token) {
    const double v = parse_double(key, token);
    if (!(v >= 0.0)) {
        throw ConfigError("config field '" + key + "': must be non-negative, got '" + token + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& token) {
    const std::string t = trim(token);
    if (t.empty() || t[0] == '-') {
        throw ConfigError("config field '" + key + "': expected an unsigned integer, got '" + token + "'");
    }
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size() || errno == ERANGE) {
        throw ConfigError("config field '" + key + "': cannot parse '" + t + "' as an unsigned integer");
    }
    return v;
}

double parse_theta(const std::string& key, const std::string& token) {
    const std::string t = trim(token);
    if (t == "pi/2") return half_pi;
    const double v = parse_double(key, t);
    if (v < 0.0 || v > half_pi + 1e-12) {
        throw ConfigError("config field '" + key + "': theta must lie in [0, pi/2], got '" + token + "'");
    }
    return v;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value,
                                      double (*one)(const std::string&, const std::string&)) {
    std::vector<double> out;
    for (const std::string& tok : split(value, ',')) out.push_back(one(key, tok));
    if (out.empty()) throw ConfigError("config field '" + key + "': empty list");
    return out;
}

}  // namespace

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "alpha") {
        cfg.alpha = parse_positive(key, value);
    } else if (key == "omega_c") {
        cfg.omega_c = parse_positive(key, value);
    } else if (key == "omega_co") {
        cfg.omega_co = parse_positive(key, value);
    } else if (key == "gamma_white") {
        cfg.gamma_white = parse_non_negative(key, value);
    } else if (key == "spectrum_file") {
        cfg.spectrum_file = trim(value);
    } else if (key == "beta") {
        cfg.beta = parse_double_list(key, value, parse_positive);
    } else if (key == "n") {
        cfg.n.clear();
        for (const std::string& tok : split(value, ',')) {
            const std::uint64_t v = parse_u64(key, tok);
            if (v == 0) throw ConfigError("config field 'n': thermometer counts must be >= 1");
            cfg.n.push_back(static_cast<std::size_t>(v));
        }
        if (cfg.n.empty()) throw ConfigError("config field 'n': empty list");
    } else if (key == "theta") {
        cfg.theta = parse_double_list(key, value, parse_theta);
    } else if (key == "time") {
        cfg.time = parse_double_list(key, value, parse_non_negative);
    } else if (key == "t_grid") {
        const std::vector<std::string> parts = split(value, ':');
        if (parts.size() != 3) {
            throw ConfigError("config field 't_grid': expected lo:hi:step, got '" + value + "'");
        }
        cfg.t_lo = parse_positive(key, parts[0]);
        cfg.t_hi = parse_positive(key, parts[1]);
        cfg.t_step = parse_positive(key, parts[2]);
        if (cfg.t_hi < cfg.t_lo) throw ConfigError("config field 't_grid': hi must be >= lo");
    } else if (key == "shots") {
        cfg.shots = static_cast<std::size_t>(parse_u64(key, value));
        if (cfg.shots == 0) throw ConfigError("config field 'shots': must be >= 1");
    } else if (key == "seed") {
        cfg.seed = parse_u64(key, value);
    } else if (key == "threads") {
        const std::uint64_t v = parse_u64(key, value);
        if (v > 4096) throw ConfigError("config field 'threads': unreasonable worker count");
        cfg.threads = static_cast<int>(v);
    } else if (key == "full") {
        const std::string t = trim(value);
        if (t == "0" || t == "false") {
            cfg.sample_full = false;
        } else if (t == "1" || t == "true") {
            cfg.sample_full = true;
        } else {
            throw ConfigError("config field 'full': expected 0/1/true/false, got '" + value + "'");
        }
    } else if (key == "delta_beta_rel") {
        cfg.delta_beta_rel = parse_positive(key, value);
    } else if (key == "out") {
        cfg.out = trim(value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

RunConfig parse_config(std::istream& in, RunConfig base) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value, got '" + body + "'");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": missing key before '='");
        }
        try {
            apply_key(base, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

SpectralModel model_from(const RunConfig& cfg) {
    if (cfg.spectrum_file.empty()) {
        return ohmic_model(cfg.alpha, cfg.omega_c, cfg.omega_co, cfg.gamma_white);
    }
    std::ifstream in(cfg.spectrum_file);
    if (!in) throw ConfigError("cannot open spectrum file '" + cfg.spectrum_file + "'");
    return tabulated_model(in, cfg.omega_co, cfg.gamma_white);
}

std::vector<double> time_grid(const RunConfig& cfg) {
    std::vector<double> g;
    const std::size_t count =
        static_cast<std::size_t>(std::floor((cfg.t_hi - cfg.t_lo) / cfg.t_step + 1e-9)) + 1;
    g.reserve(count);
    for (std::size_t i = 0; i < count; ++i) g.push_back(cfg.t_lo + static_cast<double>(i) * cfg.t_step);
    return g;
}

int resolve_threads(const RunConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace qtherm

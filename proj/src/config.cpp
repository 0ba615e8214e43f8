#include "feigdim/config.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>
#include <string>

#include "feigdim/monotonicity.hpp"

namespace feigdim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error("config: key '" + key + "' needs an integer, got '" + value + "'");
    }
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error("config: key '" + key + "' needs a number, got '" + value + "'");
    }
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open '" + path + "'");
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error("config: line " + std::to_string(lineno) + " is not 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "degree") {
            cfg.degree_d = parse_int(key, value);
        } else if (key == "truncation") {
            cfg.truncation_N = parse_int(key, value);
        } else if (key == "rho") {
            cfg.rho = parse_real(key, value);
        } else if (key == "radius") {
            cfg.radius = parse_real(key, value);
        } else if (key == "generations") {
            cfg.generations = parse_int(key, value);
        } else if (key == "max-depth") {
            cfg.max_depth = parse_int(key, value);
        } else if (key == "tol-newton") {
            cfg.newton_tol = parse_real(key, value);
        } else if (key == "tol-inverse") {
            cfg.inverse_tol = parse_real(key, value);
        } else if (key == "tol-partition") {
            cfg.partition_tol = parse_real(key, value);
        } else if (key == "threads") {
            cfg.threads = parse_int(key, value);
        } else if (key == "ball") {
            cfg.ball_path = value;
        } else if (key == "cert") {
            cfg.cert_path = value;
        } else if (key == "out") {
            cfg.out_path = value;
        } else {
            throw Error("config: unknown key '" + key + "' on line " + std::to_string(lineno));
        }
    }
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.degree_d == 0) {
        throw Error("missing required --degree (2, 3, or 4)");
    }
    if (cfg.degree_d < 2 || cfg.degree_d > 4) {
        throw Error("degree must be 2, 3, or 4");
    }
    if (cfg.truncation_N != 0 && (cfg.truncation_N < 4 || cfg.truncation_N > 400)) {
        throw Error("truncation must lie in [4, 400] (0 selects the degree default)");
    }
    if (cfg.rho != 0.0 && !(cfg.rho > 1.0 && cfg.rho <= 4.0)) {
        throw Error("rho must lie in (1, 4] so the fundamental interval stays evaluable");
    }
    if (!(cfg.radius > 0.0) || cfg.radius > 1e-3) {
        throw Error("radius must lie in (0, 1e-3]");
    }
    if (cfg.generations < 1 || cfg.generations > 22) {
        throw Error("generations must lie in [1, 22]");
    }
    if (cfg.max_depth != 0 && (cfg.max_depth < 2 || cfg.max_depth > 40)) {
        throw Error("max-depth must lie in [2, 40] (0 selects the degree default)");
    }
    if (!(cfg.newton_tol > 0.0) || !(cfg.inverse_tol > 0.0) || !(cfg.partition_tol > 0.0)) {
        throw Error("tolerances must be positive");
    }
    if (cfg.threads < 0) {
        throw Error("threads must be >= 0 (0 = auto)");
    }
}

RenormConfig renorm_config_of(const RunConfig& cfg) {
    RenormConfig rcfg = default_renorm_config(cfg.degree_d);
    if (cfg.truncation_N != 0) rcfg.truncation_N = cfg.truncation_N;
    if (cfg.rho != 0.0) rcfg.rho = cfg.rho;
    rcfg.newton_tol = cfg.newton_tol;
    return rcfg;
}

int resolved_max_depth(const RunConfig& cfg) {
    return cfg.max_depth != 0 ? cfg.max_depth : default_max_depth(cfg.degree_d);
}

std::string resolved_ball_path(const RunConfig& cfg) {
    return cfg.ball_path.empty() ? "feigdim_d" + std::to_string(cfg.degree_d) + ".ball"
                                 : cfg.ball_path;
}

std::string resolved_cert_path(const RunConfig& cfg) {
    return cfg.cert_path.empty() ? "feigdim_d" + std::to_string(cfg.degree_d) + ".cert.json"
                                 : cfg.cert_path;
}

std::string resolved_figures_prefix(const RunConfig& cfg) {
    return cfg.out_path.empty() ? "feigdim_d" + std::to_string(cfg.degree_d) + "_fig"
                                : cfg.out_path;
}

}  // namespace feigdim

#include "horocoho/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace horocoho {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& field,
                       const std::string& msg) {
    std::ostringstream os;
    os << "config line " << line << ", field '" << field << "': " << msg;
    throw std::invalid_argument(os.str());
}

double parse_double(int line, const std::string& field, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == nullptr || *end != '\0' || v.empty() || !std::isfinite(x))
        fail(line, field, "cannot parse number '" + v + "'");
    return x;
}

void parse_list(int line, const std::string& field, const std::string& v,
                std::vector<double>& out) {
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(line, field, item));
    }
}

} // namespace

ScanConfig parse_config(const std::string& text) {
    ScanConfig cfg;
    bool has_domain = false, has_umin = false, has_umax = false, has_n = false;

    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;
        const auto eq = raw.find('=');
        if (eq == std::string::npos)
            fail(line, raw, "expected key=value");
        const std::string key = trim(raw.substr(0, eq));
        const std::string val = trim(raw.substr(eq + 1));

        if (key == "experiment") {
            cfg.experiment = val;
        } else if (key == "grid.domain") {
            if (val == "full")
                cfg.domain = Domain::FullLine;
            else if (val == "positive")
                cfg.domain = Domain::PositiveHalf;
            else
                fail(line, key, "expected 'full' or 'positive', got '" + val + "'");
            has_domain = true;
        } else if (key == "grid.umin") {
            cfg.umin = parse_double(line, key, val);
            has_umin = true;
        } else if (key == "grid.umax") {
            cfg.umax = parse_double(line, key, val);
            has_umax = true;
        } else if (key == "grid.n") {
            cfg.n = static_cast<int>(parse_double(line, key, val));
            has_n = true;
        } else if (key == "nu") {
            parse_list(line, key, val, cfg.nu);
        } else if (key == "lambda") {
            parse_list(line, key, val, cfg.lambda);
        } else if (key == "L") {
            parse_list(line, key, val, cfg.L);
        } else if (key == "s") {
            parse_list(line, key, val, cfg.s);
        } else if (key == "sigma") {
            parse_list(line, key, val, cfg.sigma);
        } else if (key == "epsilon") {
            cfg.epsilon = parse_double(line, key, val);
        } else if (key == "tol.residual") {
            cfg.tol_residual = parse_double(line, key, val);
        } else if (key == "tol.slope") {
            cfg.tol_slope = parse_double(line, key, val);
        } else if (key == "out") {
            cfg.out = val;
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_double(line, key, val));
        } else {
            fail(line, key, "unknown field");
        }
    }

    const int grid_keys = has_domain + has_umin + has_umax + has_n;
    if (grid_keys > 0 && grid_keys < 4) {
        std::string missing = !has_domain ? "grid.domain"
                              : !has_umin ? "grid.umin"
                              : !has_umax ? "grid.umax"
                                          : "grid.n";
        throw std::invalid_argument("config: incomplete grid spec, missing '" +
                                    missing + "'");
    }
    cfg.grid_set = grid_keys == 4;
    if (cfg.grid_set) {
        if (!(cfg.umin < cfg.umax))
            throw std::invalid_argument(
                "config: field 'grid.umin': require umin < umax");
        if (cfg.n < 2)
            throw std::invalid_argument("config: field 'grid.n': require n >= 2");
    }
    if (!(cfg.tol_residual > 0.0))
        throw std::invalid_argument(
            "config: field 'tol.residual': must be positive");
    if (!(cfg.tol_slope > 0.0))
        throw std::invalid_argument("config: field 'tol.slope': must be positive");
    return cfg;
}

ScanConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

} // namespace horocoho

#pragma once

// Flat sectioned key-value config (INI style). Unknown sections or keys are
// rejected; numeric parameters are range-checked; the seed fixes every
// sampled quantity so reruns are byte-identical.

#include "contactflow/flow.hpp"
#include "contactflow/presets.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace contactflow {

struct ExperimentConfig {
    // [chart]
    std::string chart_kind = "heisenberg";
    int n = 1;
    double window = 3.0;

    // [hamiltonian] / [hamiltonian2]: preset plus free-form parameters
    ParamMap hamiltonian{{"preset", "reeb"}};
    ParamMap hamiltonian2;

    // [transform], [metric]
    ParamMap transform;
    ParamMap metric;

    // [integrator]
    IntegratorConfig integrator;

    // [experiment]
    std::string experiment = "flow";
    std::uint64_t seed = 0;
    std::vector<int> k_list;
    double t_end = 1.0;
    Vec x0;
    int t_nodes = 5;       // flow-comparison times
    int x_per_axis = 3;    // flow-comparison grid
    double eps0 = 0.4;     // mollification start
    int levels = 4;        // table depth

    // [output]
    std::string directory = "out";
    std::set<std::string> formats{"csv", "json"};

    std::string raw_text;  // hashed into the manifest

    ContactChart make_chart() const {
        if (chart_kind == "heisenberg") return standard_heisenberg(n, window);
        if (chart_kind == "flat_torus") return flat_unit_cotangent_torus();
        throw ConfigError("unknown chart kind: " + chart_kind);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double positive_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': not a number: " + value);
    }
    if (!(v > 0.0)) throw ConfigError("key '" + key + "' must be positive");
    return v;
}

inline int positive_int(const std::string& key, const std::string& value) {
    const double v = positive_double(key, value);
    if (v != std::floor(v)) throw ConfigError("key '" + key + "' must be an integer");
    return static_cast<int>(v);
}

}  // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text) {
    static const std::set<std::string> kExperiments{
        "flow", "verify-group", "verify-transform", "mollify", "riemann-sum",
        "geodesic-rigidity", "geodesic-counterexample", "symplectize", "norms", "selftest"};

    ExperimentConfig cfg;
    cfg.raw_text = text;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("bad section header at line " + std::to_string(lineno));
            section = detail::trim(line.substr(1, line.size() - 2));
            static const std::set<std::string> kSections{"chart", "hamiltonian", "hamiltonian2",
                                                         "transform", "metric", "integrator",
                                                         "experiment", "output"};
            if (!kSections.count(section)) throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("empty key or value at line " + std::to_string(lineno));

        if (section == "chart") {
            if (key == "kind") cfg.chart_kind = value;
            else if (key == "n") cfg.n = detail::positive_int(key, value);
            else if (key == "window") cfg.window = detail::positive_double(key, value);
            else throw ConfigError("unknown key '" + key + "' in [chart]");
        } else if (section == "hamiltonian") {
            cfg.hamiltonian[key] = value;
        } else if (section == "hamiltonian2") {
            cfg.hamiltonian2[key] = value;
        } else if (section == "transform") {
            cfg.transform[key] = value;
        } else if (section == "metric") {
            cfg.metric[key] = value;
        } else if (section == "integrator") {
            if (key == "step") cfg.integrator.step = detail::positive_double(key, value);
            else if (key == "fd_step") cfg.integrator.fd_step = detail::positive_double(key, value);
            else if (key == "scheme") {
                if (value == "rk4") cfg.integrator.scheme = IntegratorConfig::Scheme::rk4;
                else if (value == "euler") cfg.integrator.scheme = IntegratorConfig::Scheme::euler;
                else throw ConfigError("scheme must be rk4 or euler");
            } else throw ConfigError("unknown key '" + key + "' in [integrator]");
        } else if (section == "experiment") {
            if (key == "name") {
                if (!kExperiments.count(value)) throw ConfigError("unknown experiment: " + value);
                cfg.experiment = value;
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "k_list") {
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ','))
                    cfg.k_list.push_back(detail::positive_int(key, detail::trim(item)));
            } else if (key == "t_end") cfg.t_end = detail::positive_double(key, value);
            else if (key == "x0") cfg.x0 = detail::param_vec({{"x0", value}}, "x0", Vec());
            else if (key == "t_nodes") cfg.t_nodes = detail::positive_int(key, value);
            else if (key == "x_per_axis") cfg.x_per_axis = detail::positive_int(key, value);
            else if (key == "eps0") cfg.eps0 = detail::positive_double(key, value);
            else if (key == "levels") cfg.levels = detail::positive_int(key, value);
            else throw ConfigError("unknown key '" + key + "' in [experiment]");
        } else if (section == "output") {
            if (key == "directory") cfg.directory = value;
            else if (key == "formats") {
                cfg.formats.clear();
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    item = detail::trim(item);
                    if (item != "csv" && item != "json")
                        throw ConfigError("unknown output format: " + item);
                    cfg.formats.insert(item);
                }
            } else throw ConfigError("unknown key '" + key + "' in [output]");
        } else {
            throw ConfigError("key outside any section at line " + std::to_string(lineno));
        }
    }

    if (cfg.hamiltonian.find("preset") == cfg.hamiltonian.end())
        throw ConfigError("[hamiltonian] must name a preset");
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace contactflow

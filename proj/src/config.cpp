#include "bp/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace bp {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& v, const std::string& key) {
    size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    }
    if (pos != v.size())
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    return d;
}

std::int64_t parse_int(const std::string& v, const std::string& key) {
    size_t pos = 0;
    std::int64_t i;
    try {
        i = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + v);
    }
    if (pos != v.size())
        throw ConfigError("bad integer value for '" + key + "': " + v);
    return i;
}

} // namespace

SchemeSpec parse_scheme(const std::string& name, const ExperimentConfig& cfg) {
    SchemeSpec s;
    s.backlog = {BacklogKind::queue_length, 0.0};
    s.min_scale = 1.0;
    s.maintenance = cfg.bias_update;
    s.scheduler = cfg.scheduler;

    std::string base = name;
    auto strip_suffix = [&](const char* suffix, BacklogKind kind) {
        const size_t len = std::string(suffix).size();
        if (base.size() > len && base.compare(base.size() - len, len, suffix) == 0) {
            s.backlog.kind = kind;
            if (kind == BacklogKind::expq) s.backlog.eps = cfg.epsilon;
            base.erase(base.size() - len);
            return true;
        }
        return false;
    };
    strip_suffix("-SJB", BacklogKind::sjb) ||
        strip_suffix("-HOL", BacklogKind::hol) ||
        strip_suffix("-expQ", BacklogKind::expq);

    if (base == "BP") {
        s.bias = BiasScheme::none;
    } else if (base == "EDR-rbar" || base == "EDR") {
        s.bias = BiasScheme::edr;
    } else if (base == "SP-rbar_xr" || base == "SP") {
        s.bias = BiasScheme::sp_over_xr;
    } else if (base == "SP-rbar_xr-min" || base == "SP-min") {
        s.bias = BiasScheme::sp_over_xr_min;
    } else {
        throw ConfigError("unknown scheme '" + name + "'");
    }
    return s;
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
    ExperimentConfig cfg;
    std::istringstream in(text);
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
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": empty key or value");
        try {
            if (key == "seed") {
                cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
            } else if (key == "slots") {
                cfg.slots = static_cast<int>(parse_int(value, key));
            } else if (key == "networks") {
                cfg.networks = static_cast<int>(parse_int(value, key));
            } else if (key == "realizations") {
                cfg.realizations = static_cast<int>(parse_int(value, key));
            } else if (key == "threads") {
                cfg.threads = static_cast<int>(parse_int(value, key));
            } else if (key == "nodes") {
                cfg.sizes.clear();
                for (const std::string& v : split_list(value))
                    cfg.sizes.push_back(static_cast<int>(parse_int(v, key)));
                if (cfg.sizes.empty()) throw ConfigError("'nodes' list is empty");
            } else if (key == "target_degree") {
                cfg.target_degree = parse_double(value, key);
            } else if (key == "connect_radius") {
                cfg.connect_radius = parse_double(value, key);
            } else if (key == "interference_radius") {
                cfg.interference_radius = parse_double(value, key);
            } else if (key == "rate_mode") {
                if (value == "deterministic") cfg.rate_mode = RateMode::deterministic;
                else if (value == "jittered") cfg.rate_mode = RateMode::jittered;
                else throw ConfigError("rate_mode must be deterministic|jittered");
            } else if (key == "traffic") {
                if (value == "streaming") cfg.traffic = TrafficPattern::streaming;
                else if (value == "bursty") cfg.traffic = TrafficPattern::bursty;
                else throw ConfigError("traffic must be streaming|bursty");
            } else if (key == "bursty_cutoff") {
                cfg.traffic_cfg.bursty_cutoff = static_cast<int>(parse_int(value, key));
            } else if (key == "flow_count") {
                cfg.traffic_cfg.fixed_count = static_cast<int>(parse_int(value, key));
            } else if (key == "streaming_lambda") {
                const auto parts = split_list(value);
                if (parts.size() != 2) throw ConfigError("streaming_lambda needs lo,hi");
                cfg.traffic_cfg.streaming_lambda_lo = parse_double(parts[0], key);
                cfg.traffic_cfg.streaming_lambda_hi = parse_double(parts[1], key);
            } else if (key == "bursty_lambda") {
                const auto parts = split_list(value);
                if (parts.size() != 2) throw ConfigError("bursty_lambda needs lo,hi");
                cfg.traffic_cfg.bursty_lambda_lo = parse_double(parts[0], key);
                cfg.traffic_cfg.bursty_lambda_hi = parse_double(parts[1], key);
            } else if (key == "schemes") {
                cfg.scheme_names = split_list(value);
                if (cfg.scheme_names.empty())
                    throw ConfigError("'schemes' list is empty");
            } else if (key == "a_values") {
                cfg.a_values.clear();
                for (const std::string& v : split_list(value))
                    cfg.a_values.push_back(parse_double(v, key));
                if (cfg.a_values.empty()) throw ConfigError("'a_values' list is empty");
            } else if (key == "epsilon") {
                cfg.epsilon = parse_double(value, key);
            } else if (key == "scheduler") {
                if (value == "greedy") cfg.scheduler = SchedulerKind::greedy;
                else if (value == "exact") cfg.scheduler = SchedulerKind::exact;
                else throw ConfigError("scheduler must be greedy|exact");
            } else if (key == "bias_update") {
                if (value == "ideal") cfg.bias_update = BiasMaintenance::ideal;
                else if (value == "neighbor") cfg.bias_update = BiasMaintenance::neighbor;
                else throw ConfigError("bias_update must be ideal|neighbor");
            } else if (key == "duty_cycle_file") {
                cfg.duty_cycle_file = value;
            } else if (key == "mobility_period") {
                cfg.mobility.period = static_cast<int>(parse_int(value, key));
            } else if (key == "mobility_nodes") {
                cfg.mobility.k_moving = static_cast<int>(parse_int(value, key));
            } else if (key == "mobility_step_std") {
                cfg.mobility.step_std = parse_double(value, key);
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " +
                              e.what());
        }
    }
    // validate scheme names eagerly so typos fail before any run starts
    for (const std::string& name : cfg.scheme_names) parse_scheme(name, cfg);
    if (cfg.slots < 1) throw ConfigError(origin + ": slots must be >= 1");
    if (cfg.networks < 1 || cfg.realizations < 1)
        throw ConfigError(origin + ": networks and realizations must be >= 1");
    for (int n : cfg.sizes)
        if (n < 2) throw ConfigError(origin + ": network sizes must be >= 2");
    for (double a : cfg.a_values)
        if (a <= 0) throw ConfigError(origin + ": a_values must be positive");
    if (cfg.epsilon < 0) throw ConfigError(origin + ": epsilon must be >= 0");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

} // namespace bp

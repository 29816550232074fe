#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bp/netgraph.hpp"
#include "bp/sim.hpp"
#include "bp/traffic.hpp"

namespace bp {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything a sweep / mobility experiment needs; parsed from a plain
// "key = value" file (see the README for the format and defaults).
struct ExperimentConfig {
    std::uint64_t seed = 1;
    int slots = 1000;
    int networks = 10;
    int realizations = 10;
    int threads = 0; // 0: hardware concurrency

    std::vector<int> sizes{30};
    double target_degree = 6.0;
    double connect_radius = 1.0;
    double interference_radius = -1.0;
    RateMode rate_mode = RateMode::deterministic;

    TrafficPattern traffic = TrafficPattern::streaming;
    TrafficConfig traffic_cfg;

    std::vector<std::string> scheme_names{"EDR-rbar"};
    std::vector<double> a_values{1.0};
    double epsilon = 0.01;
    SchedulerKind scheduler = SchedulerKind::greedy;
    BiasMaintenance bias_update = BiasMaintenance::ideal;
    std::string duty_cycle_file;

    MobilityConfig mobility; // period 0 = static topology
};

// Scheme names: BP, BP-SJB, BP-HOL, EDR-rbar, SP-rbar_xr, SP-rbar_xr-min,
// EDR-rbar-SJB, EDR-rbar-HOL, EDR-rbar-expQ, SP-rbar_xr-expQ
// (short aliases EDR, SP, SP-min are accepted). eps / a / maintenance /
// scheduler come from the surrounding config.
SchemeSpec parse_scheme(const std::string& name, const ExperimentConfig& cfg);

ExperimentConfig parse_config_file(const std::string& path);
// Parses "key = value" text; `origin` only decorates error messages.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin = "<config>");

} // namespace bp

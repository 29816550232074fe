#include "bp/traffic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bp {

std::vector<FlowSpec> generate_flows(const Network& net, TrafficPattern pattern,
                                     Rng& rng, const TrafficConfig& cfg) {
    const int n = net.node_count();
    if (n < 2) throw std::invalid_argument("generate_flows: need at least 2 nodes");
    int count;
    if (cfg.fixed_count >= 0) {
        count = cfg.fixed_count;
    } else {
        const auto lo = static_cast<std::int64_t>(std::floor(cfg.count_lo_frac * n));
        const auto hi = static_cast<std::int64_t>(std::ceil(cfg.count_hi_frac * n));
        count = static_cast<int>(rng.uniform_int(lo, hi));
    }
    std::vector<FlowSpec> flows;
    flows.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        FlowSpec f;
        f.source = static_cast<NodeId>(rng.uniform_int(0, n - 1));
        do {
            f.destination = static_cast<NodeId>(rng.uniform_int(0, n - 1));
        } while (f.destination == f.source);
        f.pattern = pattern;
        f.burst_cutoff = cfg.bursty_cutoff;
        f.lambda = pattern == TrafficPattern::streaming
                       ? rng.uniform(cfg.streaming_lambda_lo, cfg.streaming_lambda_hi)
                       : rng.uniform(cfg.bursty_lambda_lo, cfg.bursty_lambda_hi);
        flows.push_back(f);
    }
    return flows;
}

int arrivals(const FlowSpec& flow, int t, Rng& rng) {
    if (t < 0) throw std::invalid_argument("arrivals: negative slot");
    if (flow.pattern == TrafficPattern::bursty && t >= flow.burst_cutoff) return 0;
    return rng.poisson(flow.lambda);
}

void save_flows(const std::vector<FlowSpec>& flows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_flows: cannot open " + path);
    out << "bpflows 1\n" << "flows " << flows.size() << "\n";
    char buf[128];
    for (const FlowSpec& f : flows) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g %s %d\n", f.source,
                      f.destination, f.lambda,
                      f.pattern == TrafficPattern::streaming ? "streaming" : "bursty",
                      f.burst_cutoff);
        out << buf;
    }
    if (!out) throw std::runtime_error("save_flows: write failed: " + path);
}

std::vector<FlowSpec> load_flows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_flows: cannot open " + path);
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "bpflows" || version != 1)
        throw std::runtime_error("load_flows: bad header in " + path);
    std::string key;
    int count = 0;
    if (!(in >> key >> count) || key != "flows" || count < 0)
        throw std::runtime_error("load_flows: expected flows line");
    std::vector<FlowSpec> flows(static_cast<size_t>(count));
    for (FlowSpec& f : flows) {
        std::string pat;
        if (!(in >> f.source >> f.destination >> f.lambda >> pat >> f.burst_cutoff))
            throw std::runtime_error("load_flows: bad flow record");
        if (pat == "streaming")
            f.pattern = TrafficPattern::streaming;
        else if (pat == "bursty")
            f.pattern = TrafficPattern::bursty;
        else
            throw std::runtime_error("load_flows: unknown pattern " + pat);
        if (f.source == f.destination || f.lambda <= 0)
            throw std::runtime_error("load_flows: invalid flow record");
    }
    return flows;
}

} // namespace bp

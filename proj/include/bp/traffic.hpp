#pragma once

#include <string>
#include <vector>

#include "bp/netgraph.hpp"
#include "bp/rng.hpp"

namespace bp {

enum class TrafficPattern { streaming, bursty };

struct FlowSpec {
    NodeId source = 0;
    NodeId destination = 0; // the flow's commodity, != source
    double lambda = 0.0;    // mean packets per slot while active
    TrafficPattern pattern = TrafficPattern::streaming;
    int burst_cutoff = 30;  // bursty flows inject nothing at or after this slot
};

struct TrafficConfig {
    // Flow count is uniform on [floor(lo_frac*|V|), ceil(hi_frac*|V|)].
    double count_lo_frac = 0.30;
    double count_hi_frac = 0.50;
    int fixed_count = -1; // >= 0 overrides the fractional rule
    double streaming_lambda_lo = 0.2;
    double streaming_lambda_hi = 1.0;
    double bursty_lambda_lo = 2.0;
    double bursty_lambda_hi = 10.0;
    int bursty_cutoff = 30;
};

std::vector<FlowSpec> generate_flows(const Network& net, TrafficPattern pattern,
                                     Rng& rng, const TrafficConfig& cfg = {});

// Poisson(lambda) draw per slot; bursty flows return 0 for t >= cutoff.
int arrivals(const FlowSpec& flow, int t, Rng& rng);

void save_flows(const std::vector<FlowSpec>& flows, const std::string& path);
std::vector<FlowSpec> load_flows(const std::string& path);

} // namespace bp

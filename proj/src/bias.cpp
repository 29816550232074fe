#include "bp/bias.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bp {

DutyCycles estimate_duty_cycles(const ConflictGraph& conflict) {
    DutyCycles d;
    d.x.resize(static_cast<size_t>(conflict.vertex_count()));
    for (int e = 0; e < conflict.vertex_count(); ++e)
        d.x[static_cast<size_t>(e)] = 1.0 / (1.0 + conflict.degree(e));
    return d;
}

DutyCycles load_duty_cycles(const Network& net, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_duty_cycles: cannot open " + path);
    DutyCycles d;
    d.x.assign(static_cast<size_t>(net.link_count()), -1.0);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        NodeId a, b;
        double x;
        if (!(ls >> a)) continue; // blank or comment
        if (!(ls >> b >> x))
            throw std::runtime_error("load_duty_cycles: bad record at line " +
                                     std::to_string(lineno));
        const LinkId e = net.find_link(a, b);
        if (e < 0)
            throw std::runtime_error("load_duty_cycles: unknown link at line " +
                                     std::to_string(lineno));
        if (!(x > 0.0) || x > 1.0)
            throw std::runtime_error("load_duty_cycles: x outside (0,1] at line " +
                                     std::to_string(lineno));
        d.x[static_cast<size_t>(e)] = x;
    }
    for (LinkId e = 0; e < net.link_count(); ++e)
        if (d.x[static_cast<size_t>(e)] < 0)
            throw std::runtime_error("load_duty_cycles: missing link " +
                                     std::to_string(net.link(e).a) + "-" +
                                     std::to_string(net.link(e).b));
    return d;
}

PerHopDistances per_hop_distances(const Network& net, BiasScheme scheme,
                                  double mean_rate, const DutyCycles* duty,
                                  double k_or_r) {
    if (scheme == BiasScheme::none)
        throw std::invalid_argument("per_hop_distances: no distances for unbiased scheme");
    if (mean_rate <= 0)
        throw std::invalid_argument("per_hop_distances: mean_rate must be positive");
    const double scale = k_or_r > 0 ? k_or_r : mean_rate;
    PerHopDistances out;
    out.delta.resize(static_cast<size_t>(net.link_count()));
    if (scheme == BiasScheme::edr) {
        std::fill(out.delta.begin(), out.delta.end(), scale);
        return out;
    }
    // sp_over_xr (the _min variant rescales this afterwards)
    if (duty == nullptr)
        throw std::invalid_argument("per_hop_distances: duty cycles required");
    if (duty->x.size() != static_cast<size_t>(net.link_count()))
        throw std::invalid_argument("per_hop_distances: duty cycle size mismatch");
    for (LinkId e = 0; e < net.link_count(); ++e) {
        const double x = duty->x[static_cast<size_t>(e)];
        const double r = net.link(e).rate;
        if (!(x > 0) || !(r > 0))
            throw std::invalid_argument("per_hop_distances: need x > 0 and r > 0");
        out.delta[static_cast<size_t>(e)] = scale / (x * r);
    }
    return out;
}

PerHopDistances scale_min(PerHopDistances delta, double a, double mean_rate) {
    if (delta.delta.empty())
        throw std::invalid_argument("scale_min: empty link set");
    if (a <= 0 || mean_rate <= 0)
        throw std::invalid_argument("scale_min: a and mean_rate must be positive");
    const double mn = *std::min_element(delta.delta.begin(), delta.delta.end());
    if (!(mn > 0)) throw std::invalid_argument("scale_min: deltas must be positive");
    const double factor = a * mean_rate / mn;
    for (double& d : delta.delta) d *= factor;
    return delta;
}

BiasTable::BiasTable(std::vector<NodeId> commodities, int n_nodes)
    : commodities_(std::move(commodities)) {
    std::sort(commodities_.begin(), commodities_.end());
    commodities_.erase(std::unique(commodities_.begin(), commodities_.end()),
                       commodities_.end());
    values_.assign(commodities_.size(),
                   std::vector<double>(static_cast<size_t>(n_nodes),
                                       kUnreachableBias));
    for (size_t ci = 0; ci < commodities_.size(); ++ci)
        values_[ci][static_cast<size_t>(commodities_[ci])] = 0.0;
}

int BiasTable::commodity_index(NodeId c) const {
    auto it = std::lower_bound(commodities_.begin(), commodities_.end(), c);
    if (it == commodities_.end() || *it != c) return -1;
    return static_cast<int>(it - commodities_.begin());
}

BiasTable compute_biases_sssp(const Network& net, const PerHopDistances& delta,
                              std::vector<NodeId> commodities) {
    if (delta.delta.size() != static_cast<size_t>(net.link_count()))
        throw std::invalid_argument("compute_biases_sssp: delta size mismatch");
    for (double d : delta.delta)
        if (!(d > 0))
            throw std::invalid_argument("compute_biases_sssp: deltas must be positive");

    BiasTable table(std::move(commodities), net.node_count());
    const int n = net.node_count();
    for (size_t ci = 0; ci < table.commodities().size(); ++ci) {
        std::vector<double>& dist = table.values()[ci];
        // Bellman-Ford: sweep all links, relax both directions, until stable.
        bool changed = true;
        for (int round = 0; round < n && changed; ++round) {
            changed = false;
            for (LinkId e = 0; e < net.link_count(); ++e) {
                const Link& l = net.link(e);
                const double d = delta.delta[static_cast<size_t>(e)];
                const double via_b = dist[static_cast<size_t>(l.b)] + d;
                if (via_b < dist[static_cast<size_t>(l.a)]) {
                    dist[static_cast<size_t>(l.a)] = via_b;
                    changed = true;
                }
                const double via_a = dist[static_cast<size_t>(l.a)] + d;
                if (via_a < dist[static_cast<size_t>(l.b)]) {
                    dist[static_cast<size_t>(l.b)] = via_a;
                    changed = true;
                }
            }
        }
        if (changed)
            throw std::logic_error("compute_biases_sssp: did not converge");
        for (double v : dist)
            if (v >= kUnreachableBias)
                throw std::invalid_argument(
                    "compute_biases_sssp: network is disconnected");
    }
    return table;
}

bool DirtyNodes::any() const {
    for (const auto& per_c : mark)
        for (char m : per_c)
            if (m) return true;
    return false;
}

DirtyNodes DirtyNodes::none(int n_commodities, int n_nodes) {
    DirtyNodes d;
    d.mark.assign(static_cast<size_t>(n_commodities),
                  std::vector<char>(static_cast<size_t>(n_nodes), 0));
    return d;
}

void DirtyNodes::mark_node_all_commodities(NodeId v) {
    for (auto& per_c : mark) per_c[static_cast<size_t>(v)] = 1;
}

int neighbor_update_round(BiasTable& table, const Network& net,
                          const PerHopDistances& delta, DirtyNodes* dirty) {
    if (delta.delta.size() != static_cast<size_t>(net.link_count()))
        throw std::invalid_argument("neighbor_update_round: delta size mismatch");
    const int n = net.node_count();
    const auto n_comm = table.commodities().size();
    if (dirty && dirty->mark.size() != n_comm)
        throw std::invalid_argument("neighbor_update_round: dirty size mismatch");

    int changed_entries = 0;
    DirtyNodes next = dirty ? DirtyNodes::none(static_cast<int>(n_comm), n)
                            : DirtyNodes{};
    for (size_t ci = 0; ci < n_comm; ++ci) {
        const NodeId dest = table.commodities()[ci];
        const std::vector<double> snapshot = table.values()[ci];
        std::vector<double>& cur = table.values()[ci];
        for (NodeId v = 0; v < n; ++v) {
            if (v == dest) continue; // destination is pinned at 0
            if (dirty && !dirty->mark[ci][static_cast<size_t>(v)]) continue;
            double best = kUnreachableBias;
            for (auto [u, e] : net.neighbors(v)) {
                const double cand =
                    snapshot[static_cast<size_t>(u)] + delta.delta[static_cast<size_t>(e)];
                if (cand < best) best = cand;
            }
            if (best != snapshot[static_cast<size_t>(v)]) {
                cur[static_cast<size_t>(v)] = best;
                ++changed_entries;
                if (dirty)
                    for (auto [u, e] : net.neighbors(v)) {
                        (void)e;
                        next.mark[ci][static_cast<size_t>(u)] = 1;
                    }
            }
        }
        if (dirty) {
            // a changed destination neighbor never reopens the destination
            next.mark[ci][static_cast<size_t>(dest)] = 0;
        }
    }
    if (dirty) *dirty = std::move(next);
    return changed_entries;
}

} // namespace bp

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bp/rng.hpp"

namespace bp {

using NodeId = int;
using LinkId = int;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Vec2& p, const Vec2& q);

// Undirected link between nodes a < b with a long-term rate in packets/slot.
struct Link {
    NodeId a = 0;
    NodeId b = 0;
    double rate = 0.0;
};

struct LinkDiff {
    std::vector<LinkId> created;                      // ids in the new link set
    std::vector<std::pair<NodeId, NodeId>> destroyed; // node pairs that lost their link
};

// Wireless connectivity graph: node positions on the plane, an undirected
// link between every pair of nodes within connect_radius, and per-link
// long-term rates. Links are kept sorted by (a, b), so link ids are a
// deterministic function of the topology.
class Network {
public:
    Network() = default;
    // Builds the link set from the radius rule; rates start at 0.
    Network(std::vector<Vec2> positions, double connect_radius,
            double interference_radius = -1.0);

    int node_count() const { return static_cast<int>(pos_.size()); }
    int link_count() const { return static_cast<int>(links_.size()); }
    const Vec2& position(NodeId v) const { return pos_[static_cast<size_t>(v)]; }
    const Link& link(LinkId e) const { return links_[static_cast<size_t>(e)]; }
    const std::vector<Link>& links() const { return links_; }
    double connect_radius() const { return connect_radius_; }
    double interference_radius() const { return interference_radius_; }

    // (neighbor node, link id) pairs, sorted by neighbor id.
    std::span<const std::pair<NodeId, LinkId>> neighbors(NodeId v) const {
        return adj_[static_cast<size_t>(v)];
    }

    LinkId find_link(NodeId i, NodeId j) const; // -1 if absent
    bool connected() const;

    // Arithmetic mean of long-term link rates (the network-wide average rate).
    double mean_rate() const;

    void set_rate(LinkId e, double r);

    // Replaces positions and rebuilds the link set from the radius rule.
    // Surviving links keep their rates; each created link gets new_rate().
    LinkDiff rebuild(std::vector<Vec2> positions,
                     const std::function<double()>& new_rate);

private:
    void build_links_from_positions();
    void build_adjacency();

    std::vector<Vec2> pos_;
    std::vector<Link> links_;
    std::vector<std::vector<std::pair<NodeId, LinkId>>> adj_;
    double connect_radius_ = 1.0;
    double interference_radius_ = 1.0;
};

// Link-vertex graph: vertices are link ids, edges mark pairs of links that
// cannot transmit in the same slot.
class ConflictGraph {
public:
    ConflictGraph() = default;
    explicit ConflictGraph(int n_links) : neighbors_(static_cast<size_t>(n_links)) {}

    int vertex_count() const { return static_cast<int>(neighbors_.size()); }
    void add_conflict(LinkId e, LinkId f);
    bool conflicting(LinkId e, LinkId f) const;
    const std::vector<LinkId>& neighbors(LinkId e) const {
        return neighbors_[static_cast<size_t>(e)];
    }
    int degree(LinkId e) const {
        return static_cast<int>(neighbors_[static_cast<size_t>(e)].size());
    }
    std::size_t conflict_count() const;

private:
    std::vector<std::vector<LinkId>> neighbors_; // sorted per vertex
};

// Two links conflict if they share a node or if any endpoint of one is within
// interference_radius of any endpoint of the other.
ConflictGraph build_conflict_graph(const Network& net);

struct GenerateOptions {
    double connect_radius = 1.0;
    double interference_radius = -1.0; // < 0 means "same as connect_radius"
    double rate_lo = 10.0;
    double rate_hi = 42.0;
    int max_retries = 100;
};

// Uniform 2D point process in a square sized so the expected node degree is
// about target_degree; resamples until the graph is connected.
Network generate_network(int n, std::uint64_t seed, double target_degree = 6.0,
                         const GenerateOptions& opts = {});

struct MobilityReport {
    std::vector<LinkId> created;
    std::vector<std::pair<NodeId, NodeId>> destroyed;
    int moved = 0; // nodes whose displacement was accepted
};

// Displaces k_moving distinct nodes by per-coordinate Gaussian steps while
// keeping the network connected: a step that would disconnect it is
// resampled up to max_retries times, after which the node stays put.
// Created links get fresh rates drawn uniform in [rate_lo, rate_hi].
MobilityReport apply_mobility_step(Network& net, int k_moving, double step_std,
                                   Rng& rng, double rate_lo = 10.0,
                                   double rate_hi = 42.0, int max_retries = 100);

enum class RateMode { deterministic, jittered };

// Per-slot realized link rates. Deterministic: round(r_e), half-to-even.
// Jittered: uniform integer in [ceil(0.7 r_e), floor(1.3 r_e)].
std::vector<int> realize_rates(const Network& net, RateMode mode, Rng& rng);

// Plain-text fixture format (documented in the README).
void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

} // namespace bp

#pragma once

#include <span>
#include <string>
#include <vector>

#include "bp/netgraph.hpp"

namespace bp {

enum class BiasScheme { none, edr, sp_over_xr, sp_over_xr_min };

// Edge lengths used in the shortest-path bias computation.
struct PerHopDistances {
    std::vector<double> delta; // per link, > 0
};

// Estimated fraction of airtime each link can obtain, in (0, 1].
struct DutyCycles {
    std::vector<double> x; // per link
};

// Default heuristic: x_e = 1 / (1 + conflict_degree(e)).
DutyCycles estimate_duty_cycles(const ConflictGraph& conflict);

// One record per link "a b x"; every link of the network must be covered.
DutyCycles load_duty_cycles(const Network& net, const std::string& path);

// edr: delta_e = K (uniform). sp_over_xr: delta_e = R / (x_e * r_e).
// K and R default to the mean link rate when k_or_r <= 0.
PerHopDistances per_hop_distances(const Network& net, BiasScheme scheme,
                                  double mean_rate,
                                  const DutyCycles* duty = nullptr,
                                  double k_or_r = -1.0);

// Rescales so the minimum per-hop distance is exactly a * mean_rate.
PerHopDistances scale_min(PerHopDistances delta, double a, double mean_rate);

// Finite stand-in for "unreachable" so min-plus arithmetic stays total.
inline constexpr double kUnreachableBias = 1e12;

// Shortest-path distance to each commodity under per-link lengths delta.
// values()[ci][v] is the bias of node v for the ci-th commodity.
class BiasTable {
public:
    BiasTable() = default;
    // Starts every entry at the unreachable sentinel except B_c(c) = 0.
    BiasTable(std::vector<NodeId> commodities, int n_nodes);

    int node_count() const {
        return values_.empty() ? 0 : static_cast<int>(values_[0].size());
    }
    std::span<const NodeId> commodities() const { return commodities_; }
    int commodity_index(NodeId c) const; // -1 if absent

    double at(int ci, NodeId v) const {
        return values_[static_cast<size_t>(ci)][static_cast<size_t>(v)];
    }
    bool reachable(int ci, NodeId v) const { return at(ci, v) < kUnreachableBias; }

    std::vector<std::vector<double>>& values() { return values_; }
    const std::vector<std::vector<double>>& values() const { return values_; }

    bool operator==(const BiasTable& other) const {
        return commodities_ == other.commodities_ && values_ == other.values_;
    }

private:
    std::vector<NodeId> commodities_; // sorted
    std::vector<std::vector<double>> values_;
};

// Bellman-Ford SSSP per commodity (synchronous relaxation to fixpoint).
// Throws if some node cannot reach a commodity.
BiasTable compute_biases_sssp(const Network& net, const PerHopDistances& delta,
                              std::vector<NodeId> commodities);

// Per-commodity dirty marks driving event-triggered maintenance.
struct DirtyNodes {
    std::vector<std::vector<char>> mark; // [ci][node]
    bool any() const;
    static DirtyNodes none(int n_commodities, int n_nodes);
    void mark_node_all_commodities(NodeId v);
};

// One synchronous round of the neighborhood update rule:
//   B_i(c) <- min over neighbors j of (B_j(c) + delta_ij), destination stays 0.
// All reads come from the previous round's snapshot. Returns the number of
// entries that changed. When `dirty` is given, only marked entries are
// recomputed and the marks are advanced to the neighbors of changed nodes
// (event-triggered propagation); slot-for-slot this produces the same values
// as full rounds.
int neighbor_update_round(BiasTable& table, const Network& net,
                          const PerHopDistances& delta,
                          DirtyNodes* dirty = nullptr);

} // namespace bp

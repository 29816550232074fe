#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "bp/netgraph.hpp"

namespace bp {

struct Packet {
    std::int64_t id = 0;
    NodeId commodity = 0;     // destination node
    NodeId origin = 0;
    int created_at = 0;       // slot the packet entered the network
    int node_arrival_at = 0;  // slot the packet entered its current node's queue
};

enum class BacklogKind { queue_length, hol, sjb, expq };

struct BacklogMetric {
    BacklogKind kind = BacklogKind::queue_length;
    double eps = 0.0; // expq growth parameter, >= 0
};

// One expQ accumulator step. Reads only the previous value and the slot's
// packet counts; per-packet timestamps never enter this computation.
// new = (1 + eps) * old * (1 - n_tx / q_len_before) + n_rx, where the bracket
// is taken as 1 when q_len_before == 0 (which forces n_tx == 0).
double expq_next(double old_value, double eps, int q_len_before, int n_tx,
                 int n_rx);

// FIFO queue of one commodity at one node, with the expQ accumulator.
class CommodityQueue {
public:
    int length() const { return static_cast<int>(packets_.size()); }
    bool empty() const { return packets_.empty(); }
    const Packet& head() const { return packets_.front(); }
    const std::deque<Packet>& packets() const { return packets_; }

    // Appends and stamps node_arrival_at = t.
    void enqueue(Packet p, int t);
    // Removes the n oldest packets; n must not exceed the queue length.
    std::vector<Packet> dequeue(int n);

    double backlog(const BacklogMetric& metric, int t) const;

    double expq() const { return expq_; }
    void update_expq(double eps, int q_len_before, int n_tx, int n_rx) {
        expq_ = expq_next(expq_, eps, q_len_before, n_tx, n_rx);
    }

private:
    std::deque<Packet> packets_;
    double expq_ = 0.0;
    std::int64_t arrival_sum_ = 0; // sum of node_arrival_at, for O(1) sjb
};

// Dense (node x commodity) grid of queues. Commodity indices are positions
// in a sorted commodity list owned by the caller.
class QueueGrid {
public:
    QueueGrid() = default;
    QueueGrid(int n_nodes, int n_commodities)
        : n_nodes_(n_nodes), n_commodities_(n_commodities),
          q_(static_cast<size_t>(n_nodes) * static_cast<size_t>(n_commodities)) {}

    int node_count() const { return n_nodes_; }
    int commodity_count() const { return n_commodities_; }

    CommodityQueue& at(NodeId v, int ci) {
        return q_[static_cast<size_t>(v) * static_cast<size_t>(n_commodities_) +
                  static_cast<size_t>(ci)];
    }
    const CommodityQueue& at(NodeId v, int ci) const {
        return q_[static_cast<size_t>(v) * static_cast<size_t>(n_commodities_) +
                  static_cast<size_t>(ci)];
    }

    std::int64_t total_packets() const;

private:
    int n_nodes_ = 0;
    int n_commodities_ = 0;
    std::vector<CommodityQueue> q_;
};

} // namespace bp

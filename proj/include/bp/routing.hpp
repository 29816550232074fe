#pragma once

#include <span>
#include <vector>

#include "bp/backlog.hpp"
#include "bp/netgraph.hpp"
#include "bp/scheduler.hpp"

namespace bp {

struct CommodityChoice {
    int commodity = -1;      // commodity index (position in the sorted list)
    double backpressure = 0; // achieved max difference, may be negative
};

// Argmax over commodities of u_i[c] - u_j[c]; ties resolve to the smallest
// commodity index.
CommodityChoice select_commodity(std::span<const double> u_i,
                                 std::span<const double> u_j);

// Weight clamp: negative differentials never schedule a direction.
inline double link_weight(double backpressure) {
    return backpressure > 0 ? backpressure : 0.0;
}

// One undirected link's slot decision. fwd is the a->b direction.
struct LinkDecision {
    CommodityChoice fwd, rev;
    double w_fwd = 0, w_rev = 0; // clamped directed weights
    bool forward = true;         // chosen direction (true: a->b)
    double w_tilde = 0;          // max of the directed weights
    int rate = 0;                // realized packets/slot
    double utility = 0;          // rate * w_tilde
    bool scheduled = false;
    int quota = 0;               // mu for the chosen direction's commodity
};

// Commodity selection and weights for both directions of every link.
// backlog_u is indexed [commodity][node].
std::vector<LinkDecision> select_all(
    const Network& net, const std::vector<std::vector<double>>& backlog_u);

// Fills direction, w_tilde and utility from the realized rates. Direction
// ties go to the lower node id as transmitter.
void assemble_utilities(std::vector<LinkDecision>& decisions,
                        std::span<const int> rates);

std::vector<double> utility_vector(const std::vector<LinkDecision>& decisions);

// Rate allocation: a scheduled link with positive weight carries its whole
// realized rate for the chosen direction's optimal commodity.
void allocate(std::vector<LinkDecision>& decisions, const Schedule& schedule);

struct TransferEvent {
    LinkId link = -1;
    NodeId from = -1, to = -1;
    NodeId commodity = -1; // destination node id
    int count = 0;
};

struct SlotDeltas {
    // Indexed [node * n_commodities + ci].
    std::vector<int> tx, rx;
    int& tx_at(NodeId v, int ci, int n_comm) {
        return tx[static_cast<size_t>(v) * static_cast<size_t>(n_comm) +
                  static_cast<size_t>(ci)];
    }
    int& rx_at(NodeId v, int ci, int n_comm) {
        return rx[static_cast<size_t>(v) * static_cast<size_t>(n_comm) +
                  static_cast<size_t>(ci)];
    }
};

struct TransferOutcome {
    std::vector<TransferEvent> transfers;
    std::vector<Packet> delivered; // packets absorbed at their destination
    SlotDeltas deltas;
};

// Moves min(quota, queue length) packets FIFO over each scheduled link, from
// start-of-slot queue state. Packets whose commodity equals the receiving
// node are delivered, not enqueued. Throws if a node takes part in two
// scheduled links (duplex violation).
TransferOutcome execute_transfers(QueueGrid& queues, const Network& net,
                                  std::span<const NodeId> commodities,
                                  const std::vector<LinkDecision>& decisions,
                                  int t);

} // namespace bp

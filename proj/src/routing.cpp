#include "bp/routing.hpp"

#include <algorithm>
#include <stdexcept>

namespace bp {

CommodityChoice select_commodity(std::span<const double> u_i,
                                 std::span<const double> u_j) {
    if (u_i.empty() || u_i.size() != u_j.size())
        throw std::invalid_argument("select_commodity: empty or mismatched commodity set");
    CommodityChoice best{0, u_i[0] - u_j[0]};
    for (size_t c = 1; c < u_i.size(); ++c) {
        const double diff = u_i[c] - u_j[c];
        if (diff > best.backpressure) {
            best.commodity = static_cast<int>(c);
            best.backpressure = diff;
        }
    }
    return best;
}

std::vector<LinkDecision> select_all(
    const Network& net, const std::vector<std::vector<double>>& backlog_u) {
    const size_t n_comm = backlog_u.size();
    std::vector<double> ui(n_comm), uj(n_comm);
    std::vector<LinkDecision> out(static_cast<size_t>(net.link_count()));
    for (LinkId e = 0; e < net.link_count(); ++e) {
        const Link& l = net.link(e);
        for (size_t c = 0; c < n_comm; ++c) {
            ui[c] = backlog_u[c][static_cast<size_t>(l.a)];
            uj[c] = backlog_u[c][static_cast<size_t>(l.b)];
        }
        LinkDecision& d = out[static_cast<size_t>(e)];
        d.fwd = select_commodity(ui, uj);
        d.rev = select_commodity(uj, ui);
        d.w_fwd = link_weight(d.fwd.backpressure);
        d.w_rev = link_weight(d.rev.backpressure);
    }
    return out;
}

void assemble_utilities(std::vector<LinkDecision>& decisions,
                        std::span<const int> rates) {
    if (rates.size() != decisions.size())
        throw std::invalid_argument("assemble_utilities: rate vector size mismatch");
    for (size_t e = 0; e < decisions.size(); ++e) {
        LinkDecision& d = decisions[e];
        d.forward = d.w_fwd >= d.w_rev; // tie: lower node id transmits
        d.w_tilde = d.forward ? d.w_fwd : d.w_rev;
        d.rate = rates[e];
        d.utility = static_cast<double>(d.rate) * d.w_tilde;
    }
}

std::vector<double> utility_vector(const std::vector<LinkDecision>& decisions) {
    std::vector<double> u(decisions.size());
    for (size_t e = 0; e < decisions.size(); ++e) u[e] = decisions[e].utility;
    return u;
}

void allocate(std::vector<LinkDecision>& decisions, const Schedule& schedule) {
    if (schedule.activated.size() != decisions.size())
        throw std::invalid_argument("allocate: schedule size mismatch");
    for (size_t e = 0; e < decisions.size(); ++e) {
        LinkDecision& d = decisions[e];
        d.scheduled = schedule.activated[e] != 0;
        const double w = d.forward ? d.w_fwd : d.w_rev;
        d.quota = (d.scheduled && w > 0) ? d.rate : 0;
    }
}

TransferOutcome execute_transfers(QueueGrid& queues, const Network& net,
                                  std::span<const NodeId> commodities,
                                  const std::vector<LinkDecision>& decisions,
                                  int t) {
    const int n_comm = static_cast<int>(commodities.size());
    TransferOutcome out;
    out.deltas.tx.assign(static_cast<size_t>(queues.node_count()) *
                             static_cast<size_t>(n_comm),
                         0);
    out.deltas.rx.assign(out.deltas.tx.size(), 0);

    std::vector<char> busy(static_cast<size_t>(queues.node_count()), 0);
    for (size_t e = 0; e < decisions.size(); ++e) {
        const LinkDecision& d = decisions[e];
        if (!d.scheduled) continue;
        const Link& l = net.link(static_cast<LinkId>(e));
        if (busy[static_cast<size_t>(l.a)] || busy[static_cast<size_t>(l.b)])
            throw std::logic_error("execute_transfers: node on two scheduled links");
        busy[static_cast<size_t>(l.a)] = busy[static_cast<size_t>(l.b)] = 1;
        if (d.quota <= 0) continue;

        const NodeId from = d.forward ? l.a : l.b;
        const NodeId to = d.forward ? l.b : l.a;
        const int ci = d.forward ? d.fwd.commodity : d.rev.commodity;
        CommodityQueue& src = queues.at(from, ci);
        const int n_move = std::min(d.quota, src.length());
        if (n_move <= 0) continue;

        std::vector<Packet> moved = src.dequeue(n_move);
        out.deltas.tx_at(from, ci, n_comm) += n_move;
        const NodeId commodity_node = commodities[static_cast<size_t>(ci)];
        if (to == commodity_node) {
            for (Packet& p : moved) out.delivered.push_back(p);
        } else {
            CommodityQueue& dst = queues.at(to, ci);
            for (Packet& p : moved) dst.enqueue(p, t);
            out.deltas.rx_at(to, ci, n_comm) += n_move;
        }
        out.transfers.push_back(
            TransferEvent{static_cast<LinkId>(e), from, to, commodity_node, n_move});
    }
    return out;
}

} // namespace bp

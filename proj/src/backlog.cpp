#include "bp/backlog.hpp"

#include <stdexcept>

namespace bp {

double expq_next(double old_value, double eps, int q_len_before, int n_tx,
                 int n_rx) {
    if (eps < 0) throw std::invalid_argument("expq_next: eps must be >= 0");
    if (n_tx < 0 || n_rx < 0)
        throw std::logic_error("expq_next: negative packet count");
    if (n_tx > q_len_before)
        throw std::logic_error("expq_next: n_tx exceeds queue length");
    double v;
    if (q_len_before == 0) {
        v = (1.0 + eps) * old_value + static_cast<double>(n_rx);
    } else {
        // Grouped as old*(q - tx)/q so that with eps = 0 and old == q the
        // result stays an exact integer (the division is exact).
        v = (1.0 + eps) * (old_value * static_cast<double>(q_len_before - n_tx)) /
                static_cast<double>(q_len_before) +
            static_cast<double>(n_rx);
    }
    return v < 0.0 ? 0.0 : v;
}

void CommodityQueue::enqueue(Packet p, int t) {
    p.node_arrival_at = t;
    arrival_sum_ += t;
    packets_.push_back(p);
}

std::vector<Packet> CommodityQueue::dequeue(int n) {
    if (n < 0) throw std::logic_error("dequeue: negative count");
    if (n > length()) throw std::logic_error("dequeue: over-dequeue");
    std::vector<Packet> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        arrival_sum_ -= packets_.front().node_arrival_at;
        out.push_back(packets_.front());
        packets_.pop_front();
    }
    return out;
}

double CommodityQueue::backlog(const BacklogMetric& metric, int t) const {
    switch (metric.kind) {
    case BacklogKind::queue_length:
        return static_cast<double>(length());
    case BacklogKind::hol:
        return packets_.empty()
                   ? 0.0
                   : static_cast<double>(t - packets_.front().node_arrival_at);
    case BacklogKind::sjb:
        return static_cast<double>(static_cast<std::int64_t>(length()) * t -
                                   arrival_sum_);
    case BacklogKind::expq:
        return expq_;
    }
    return 0.0;
}

std::int64_t QueueGrid::total_packets() const {
    std::int64_t s = 0;
    for (const CommodityQueue& q : q_) s += q.length();
    return s;
}

} // namespace bp

#include "bp/scheduler.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace bp {

namespace {

// Branch-and-bound state over a bitmask universe (size_cap <= 63 links).
struct BnB {
    const std::vector<std::uint64_t>& closed_nb; // N[v] including v
    const std::vector<double>& w;
    double best = 0.0;
    std::uint64_t best_set = 0;

    double weight_sum(std::uint64_t avail) const {
        double s = 0.0;
        std::uint64_t m = avail;
        while (m) {
            const int v = std::countr_zero(m);
            s += w[static_cast<size_t>(v)];
            m &= m - 1;
        }
        return s;
    }

    // Branches on the lowest available id, include before exclude: the first
    // leaf that improves `best` is the lexicographically smallest among the
    // maximum-utility sets (all weights are positive here).
    void search(std::uint64_t avail, double current, std::uint64_t chosen) {
        if (avail == 0) {
            if (current > best) {
                best = current;
                best_set = chosen;
            }
            return;
        }
        if (current + weight_sum(avail) <= best) return;
        const int v = std::countr_zero(avail);
        search(avail & ~closed_nb[static_cast<size_t>(v)],
               current + w[static_cast<size_t>(v)],
               chosen | (std::uint64_t{1} << v));
        search(avail & ~(std::uint64_t{1} << v), current, chosen);
    }
};

} // namespace

Schedule exact_mwis(const ConflictGraph& conflict, std::span<const double> utility,
                    int size_cap) {
    const int n = conflict.vertex_count();
    if (static_cast<int>(utility.size()) != n)
        throw std::invalid_argument("exact_mwis: utility size mismatch");
    if (size_cap > 63) size_cap = 63;
    if (n > size_cap)
        throw std::invalid_argument("exact_mwis: instance above size cap");
    for (double u : utility)
        if (u < 0) throw std::invalid_argument("exact_mwis: negative utility");

    std::vector<std::uint64_t> closed_nb(static_cast<size_t>(n), 0);
    for (int v = 0; v < n; ++v) {
        std::uint64_t m = std::uint64_t{1} << v;
        for (LinkId u : conflict.neighbors(v)) m |= std::uint64_t{1} << u;
        closed_nb[static_cast<size_t>(v)] = m;
    }

    // Zero-utility vertices never enter the schedule (w > 0 gating), so drop
    // them from the search universe up front.
    std::uint64_t universe = 0;
    std::vector<double> w(utility.begin(), utility.end());
    for (int v = 0; v < n; ++v)
        if (w[static_cast<size_t>(v)] > 0) universe |= std::uint64_t{1} << v;

    BnB bnb{closed_nb, w};
    bnb.search(universe, 0.0, 0);

    Schedule s;
    s.activated.assign(static_cast<size_t>(n), 0);
    double total = 0.0;
    for (int v = 0; v < n; ++v) {
        if (bnb.best_set & (std::uint64_t{1} << v)) {
            s.activated[static_cast<size_t>(v)] = 1;
            s.links.push_back(v);
            total += w[static_cast<size_t>(v)];
        }
    }
    s.total_utility = total;
    return s;
}

Schedule greedy_schedule(const ConflictGraph& conflict,
                         std::span<const double> utility) {
    const int n = conflict.vertex_count();
    if (static_cast<int>(utility.size()) != n)
        throw std::invalid_argument("greedy_schedule: utility size mismatch");
    for (double u : utility)
        if (u < 0) throw std::invalid_argument("greedy_schedule: negative utility");

    std::vector<LinkId> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](LinkId a, LinkId b) {
        if (utility[static_cast<size_t>(a)] != utility[static_cast<size_t>(b)])
            return utility[static_cast<size_t>(a)] > utility[static_cast<size_t>(b)];
        return a < b;
    });

    Schedule s;
    s.activated.assign(static_cast<size_t>(n), 0);
    std::vector<char> removed(static_cast<size_t>(n), 0);
    for (LinkId v : order) {
        if (removed[static_cast<size_t>(v)]) continue;
        if (!(utility[static_cast<size_t>(v)] > 0)) break; // rest are zero
        s.activated[static_cast<size_t>(v)] = 1;
        s.links.push_back(v);
        s.total_utility += utility[static_cast<size_t>(v)];
        removed[static_cast<size_t>(v)] = 1;
        for (LinkId u : conflict.neighbors(v)) removed[static_cast<size_t>(u)] = 1;
    }
    std::sort(s.links.begin(), s.links.end());
    return s;
}

bool is_independent(const ConflictGraph& conflict,
                    const std::vector<char>& activated) {
    const int n = conflict.vertex_count();
    if (static_cast<int>(activated.size()) != n) return false;
    for (int v = 0; v < n; ++v) {
        if (!activated[static_cast<size_t>(v)]) continue;
        for (LinkId u : conflict.neighbors(v))
            if (u > v && activated[static_cast<size_t>(u)]) return false;
    }
    return true;
}

} // namespace bp

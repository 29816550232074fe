#pragma once

#include <span>
#include <vector>

#include "bp/netgraph.hpp"

namespace bp {

// MaxWeight scheduling output: the set of links activated for one slot.
// Always an independent set of the conflict graph.
struct Schedule {
    std::vector<char> activated;  // per link
    std::vector<LinkId> links;    // activated ids, ascending
    double total_utility = 0.0;
};

inline constexpr int kDefaultExactCap = 25;

// Exact maximum weighted independent set on the conflict graph.
// Ties on total utility resolve to the lexicographically smallest activated
// id set. Zero-utility vertices are never activated. Intended as a scheduling
// oracle; rejects instances larger than size_cap.
Schedule exact_mwis(const ConflictGraph& conflict, std::span<const double> utility,
                    int size_cap = kDefaultExactCap);

// Local greedy scheduler: repeatedly activate the unresolved link with the
// highest positive utility (ties to the smaller id) and knock out its
// conflict neighbors. Maximal among positive-utility links.
Schedule greedy_schedule(const ConflictGraph& conflict,
                         std::span<const double> utility);

bool is_independent(const ConflictGraph& conflict,
                    const std::vector<char>& activated);

} // namespace bp

#include "doctest.h"

#include <stdexcept>

#include "bp/scheduler.hpp"
#include "bp/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

using namespace bp;

namespace {

// Exhaustive reference: every subset, keep independent ones, maximize summed
// utility, break ties by the lexicographically smallest id vector. Mirrors
// the w > 0 gating: zero-utility vertices never activate.
struct EnumResult {
    std::vector<LinkId> set;
    double utility = 0.0;
};

EnumResult enumerate_mwis(const ConflictGraph& g, const std::vector<double>& w) {
    const int n = g.vertex_count();
    EnumResult best; // empty set, utility 0
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<LinkId> set;
        double util = 0.0;
        bool ok = true;
        for (int v = 0; v < n && ok; ++v) {
            if (!(mask & (1u << v))) continue;
            if (!(w[static_cast<size_t>(v)] > 0)) { ok = false; break; }
            for (LinkId u : set)
                if (g.conflicting(u, v)) { ok = false; break; }
            if (ok) {
                set.push_back(v);
                util += w[static_cast<size_t>(v)];
            }
        }
        if (!ok) continue;
        if (util > best.utility ||
            (util == best.utility &&
             std::lexicographical_compare(set.begin(), set.end(),
                                          best.set.begin(), best.set.end())))
            best = {set, util};
    }
    return best;
}

ConflictGraph path_graph(int n) {
    ConflictGraph g(n);
    for (int v = 0; v + 1 < n; ++v) g.add_conflict(v, v + 1);
    return g;
}

bool is_maximal(const ConflictGraph& g, const std::vector<double>& w,
                const Schedule& s) {
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (s.activated[static_cast<size_t>(v)] || !(w[static_cast<size_t>(v)] > 0))
            continue;
        bool blocked = false;
        for (LinkId u : g.neighbors(v))
            if (s.activated[static_cast<size_t>(u)]) { blocked = true; break; }
        if (!blocked) return false;
    }
    return true;
}

} // namespace

TEST_CASE("single positive vertex is scheduled") {
    ConflictGraph g(1);
    const std::vector<double> w{5.0};
    Schedule s = exact_mwis(g, w);
    CHECK(s.links == std::vector<LinkId>{0});
    CHECK(s.total_utility == 5.0);
}

TEST_CASE("triangle keeps only the heaviest vertex") {
    ConflictGraph g(3);
    g.add_conflict(0, 1);
    g.add_conflict(1, 2);
    g.add_conflict(0, 2);
    const std::vector<double> w{3.0, 2.0, 2.0};
    Schedule s = exact_mwis(g, w);
    CHECK(s.links == std::vector<LinkId>{0});
    CHECK(s.total_utility == 3.0);
}

TEST_CASE("path with a heavy middle vertex") {
    // independent sets: {}, {0}, {1}, {2}, {0,2}; weights 1,3,1 make {1} best
    const std::vector<double> w{1.0, 3.0, 1.0};
    ConflictGraph g = path_graph(3);
    EnumResult ref = enumerate_mwis(g, w);
    REQUIRE(ref.set == std::vector<LinkId>{1});
    REQUIRE(ref.utility == 3.0);

    Schedule ex = exact_mwis(g, w);
    CHECK(ex.links == ref.set);
    CHECK(ex.total_utility == ref.utility);

    Schedule gr = greedy_schedule(g, w);
    CHECK(gr.links == std::vector<LinkId>{1});
}

TEST_CASE("greedy resolves the (2,1,1,2) path to the two ends") {
    const std::vector<double> w{2.0, 1.0, 1.0, 2.0};
    Schedule gr = greedy_schedule(path_graph(4), w);
    CHECK(gr.links == std::vector<LinkId>{0, 3});
    CHECK(gr.total_utility == 4.0);
}

TEST_CASE("zero utilities are never scheduled") {
    const std::vector<double> w{0.0, 0.0, 0.0};
    ConflictGraph g = path_graph(3);
    CHECK(greedy_schedule(g, w).links.empty());
    CHECK(exact_mwis(g, w).links.empty());
}

TEST_CASE("utility ties resolve to the lexicographically smallest set") {
    // path 0-1-2-3, all weight 1: maximizers {0,2},{0,3},{1,3}
    const std::vector<double> w{1.0, 1.0, 1.0, 1.0};
    Schedule ex = exact_mwis(path_graph(4), w);
    CHECK(ex.links == std::vector<LinkId>{0, 2});
    // greedy tie -> smaller id first
    Schedule gr = greedy_schedule(path_graph(4), w);
    CHECK(gr.links == std::vector<LinkId>{0, 2});
}

TEST_CASE("instances above the size cap are rejected") {
    ConflictGraph g(26);
    std::vector<double> w(26, 1.0);
    CHECK_THROWS_AS(exact_mwis(g, w), std::invalid_argument);
    CHECK_NOTHROW(exact_mwis(g, w, 26));
    CHECK_THROWS_AS(exact_mwis(ConflictGraph(2), std::vector<double>{1.0, -1.0}),
                    std::invalid_argument);
}

TEST_CASE("exact matches exhaustive enumeration on random instances") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(1, 10));
        ConflictGraph g(n);
        for (int v = 0; v < n; ++v)
            for (int u = v + 1; u < n; ++u)
                if (rng.uniform01() < 0.4) g.add_conflict(v, u);
        std::vector<double> w(static_cast<size_t>(n));
        for (double& x : w) x = static_cast<double>(rng.uniform_int(1, 20));

        EnumResult ref = enumerate_mwis(g, w);
        Schedule ex = exact_mwis(g, w);
        REQUIRE(ex.total_utility == ref.utility);
        REQUIRE(ex.links == ref.set);
        REQUIRE(is_independent(g, ex.activated));

        Schedule gr = greedy_schedule(g, w);
        REQUIRE(is_independent(g, gr.activated));
        REQUIRE(gr.total_utility <= ex.total_utility);
        REQUIRE(is_maximal(g, w, gr));
    }
}

TEST_CASE("greedy is maximal among positive-utility links with zero weights present") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 12));
        ConflictGraph g(n);
        for (int v = 0; v < n; ++v)
            for (int u = v + 1; u < n; ++u)
                if (rng.uniform01() < 0.3) g.add_conflict(v, u);
        std::vector<double> w(static_cast<size_t>(n));
        for (double& x : w) x = rng.uniform01() < 0.3 ? 0.0 : rng.uniform(0.5, 9.0);
        Schedule gr = greedy_schedule(g, w);
        REQUIRE(is_independent(g, gr.activated));
        REQUIRE(is_maximal(g, w, gr));
        for (LinkId v : gr.links) REQUIRE(w[static_cast<size_t>(v)] > 0);
    }
}

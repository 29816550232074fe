#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bp/backlog.hpp"
#include "bp/bias.hpp"
#include "bp/netgraph.hpp"
#include "bp/routing.hpp"
#include "bp/scheduler.hpp"
#include "bp/traffic.hpp"

namespace bp {

enum class SchedulerKind { greedy, exact };
enum class BiasMaintenance { ideal, neighbor };

// One routing policy: which backlog metric feeds Eq-style backpressure
// decisions, which shortest-path bias (if any) is added, how biases are kept
// current under mobility, and which MaxWeight solver runs.
struct SchemeSpec {
    BacklogMetric backlog;
    BiasScheme bias = BiasScheme::none;
    double min_scale = 1.0; // multiplier a: min per-hop distance = a * mean rate
    BiasMaintenance maintenance = BiasMaintenance::ideal;
    SchedulerKind scheduler = SchedulerKind::greedy;

    bool biased() const { return bias != BiasScheme::none; }
    std::string name() const;
};

struct MobilityConfig {
    int period = 0; // slots between mobility steps; 0 disables mobility
    int k_moving = 10;
    double step_std = 0.1;
};

struct InitialPackets {
    NodeId node = 0;
    NodeId commodity = 0;
    int count = 0;
};

struct SlotView {
    int t = 0;
    const Network& net;
    const QueueGrid& queues;
    std::span<const NodeId> commodities;
    const std::vector<LinkDecision>& decisions;
    const std::vector<TransferEvent>& transfers;
    const BiasTable& bias;
};

struct SimOptions {
    int slots = 1000;
    RateMode rate_mode = RateMode::deterministic;
    MobilityConfig mobility;
    std::vector<InitialPackets> initial_packets;
    const DutyCycles* duty_override = nullptr; // static topology only
    int exact_cap = kDefaultExactCap;
    bool record_packets = true;
    std::function<void(const SlotView&)> observer;
};

struct PacketRecord {
    int t0 = 0;
    int t1 = -1; // -1: undelivered at horizon
};

struct SimResult {
    std::int64_t created = 0;
    std::int64_t delivered = 0;
    double mean_delay = 0.0;    // undelivered packets count as slots - t0
    double delivery_rate = 0.0; // delivered / created
    bool zero_packets = false;
    int slots = 0;
    std::vector<int> occupancy;        // total queued packets per slot
    std::vector<PacketRecord> packets; // present when record_packets
};

// Runs T slots of backpressure routing under the given scheme. Per-slot
// packet conservation and schedule independence are asserted throughout.
// Deterministic for a fixed seed.
SimResult run_instance(const Network& net, const ConflictGraph& conflict,
                       const std::vector<FlowSpec>& flows,
                       const SchemeSpec& scheme, const SimOptions& opts,
                       std::uint64_t seed);

// Four-node last-packet scenario: a diamond with a chord, destination at the
// far end, q packets staged two hops away, every link at the same rate.
struct Lemma1Options {
    double rate = 26.0;
    int packets = 20; // q, must be <= rate
    int slots = 12;
};

struct Lemma1Run {
    std::vector<std::pair<int, TransferEvent>> transfers; // (slot, event)
    int first_forward_slot = -1;
    int first_backward_slot = -1;
    int delivered = 0;
    bool all_forward = true;          // every transfer decreases hop distance
    double scheduled_next_bp = 0.0;   // backpressure on the first scheduled
                                      // link one slot after it fired
};

struct Lemma1Result {
    Lemma1Run biased;   // per-hop distance = link rate
    Lemma1Run unbiased; // no bias
    double rate = 0.0;
    int packets = 0;
    bool biased_ok = false;    // no backward moves, everything delivered forward
    bool unbiased_reversal = false; // backward transfer within 2 slots of the
                                    // first forward move
    bool pass = false;
};

Lemma1Result run_lemma1(const Lemma1Options& opts = {});

} // namespace bp

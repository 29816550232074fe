#include "bp/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace bp {

std::string SchemeSpec::name() const {
    std::string base;
    switch (bias) {
    case BiasScheme::none: base = "BP"; break;
    case BiasScheme::edr: base = "EDR-rbar"; break;
    case BiasScheme::sp_over_xr: base = "SP-rbar_xr"; break;
    case BiasScheme::sp_over_xr_min: base = "SP-rbar_xr-min"; break;
    }
    switch (backlog.kind) {
    case BacklogKind::queue_length: break;
    case BacklogKind::hol: base += "-HOL"; break;
    case BacklogKind::sjb: base += "-SJB"; break;
    case BacklogKind::expq: base += "-expQ"; break;
    }
    if (biased() && min_scale != 1.0) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "(a=%g)", min_scale);
        base += buf;
    }
    return base;
}

namespace {

class Simulation {
public:
    Simulation(const Network& net, const ConflictGraph& conflict,
               const std::vector<FlowSpec>& flows, const SchemeSpec& scheme,
               const SimOptions& opts, std::uint64_t seed)
        : net_(net), conflict_(conflict), flows_(flows), scheme_(scheme),
          opts_(opts), traffic_rng_(mix_seed(seed, 0x747266)),
          rate_rng_(mix_seed(seed, 0x727465)),
          mobility_rng_(mix_seed(seed, 0x6d6f62)) {
        if (opts_.duty_override && opts_.mobility.period > 0)
            throw std::invalid_argument(
                "run_instance: duty cycle file cannot be combined with mobility");

        std::vector<NodeId> comm;
        for (const FlowSpec& f : flows_) comm.push_back(f.destination);
        for (const InitialPackets& ip : opts_.initial_packets)
            comm.push_back(ip.commodity);
        std::sort(comm.begin(), comm.end());
        comm.erase(std::unique(comm.begin(), comm.end()), comm.end());
        commodities_ = std::move(comm);

        queues_ = QueueGrid(net_.node_count(),
                            static_cast<int>(commodities_.size()));
        flow_ci_.reserve(flows_.size());
        for (const FlowSpec& f : flows_)
            flow_ci_.push_back(commodity_index(f.destination));

        mean_rate_ = net_.mean_rate(); // frozen at initialization
        refresh_bias_inputs();
        if (scheme_.biased() && !commodities_.empty())
            bias_ = compute_biases_sssp(net_, delta_, commodities_);
        dirty_ = DirtyNodes::none(static_cast<int>(commodities_.size()),
                                  net_.node_count());

        for (const InitialPackets& ip : opts_.initial_packets) {
            if (ip.node == ip.commodity)
                throw std::invalid_argument("initial packets already at destination");
            const int ci = commodity_index(ip.commodity);
            for (int i = 0; i < ip.count; ++i) {
                Packet p;
                p.id = static_cast<std::int64_t>(records_.size());
                p.commodity = ip.commodity;
                p.origin = ip.node;
                p.created_at = 0;
                records_.push_back(PacketRecord{0, -1});
                queues_.at(ip.node, ci).enqueue(p, 0);
            }
        }
    }

    SimResult run() {
        for (int t = 0; t < opts_.slots; ++t) step(t);
        return finish();
    }

private:
    int commodity_index(NodeId c) const {
        auto it = std::lower_bound(commodities_.begin(), commodities_.end(), c);
        if (it == commodities_.end() || *it != c)
            throw std::logic_error("unknown commodity");
        return static_cast<int>(it - commodities_.begin());
    }

    void refresh_bias_inputs() {
        if (!scheme_.biased()) return;
        const DutyCycles* duty = nullptr;
        DutyCycles local;
        if (scheme_.bias != BiasScheme::edr) {
            if (opts_.duty_override) {
                duty = opts_.duty_override;
            } else {
                local = estimate_duty_cycles(conflict_);
                duty = &local;
            }
        }
        switch (scheme_.bias) {
        case BiasScheme::edr:
            delta_ = per_hop_distances(net_, BiasScheme::edr, mean_rate_, nullptr,
                                       scheme_.min_scale * mean_rate_);
            break;
        case BiasScheme::sp_over_xr:
            delta_ = per_hop_distances(net_, BiasScheme::sp_over_xr, mean_rate_,
                                       duty);
            break;
        case BiasScheme::sp_over_xr_min:
            delta_ = scale_min(per_hop_distances(net_, BiasScheme::sp_over_xr,
                                                 mean_rate_, duty),
                               scheme_.min_scale, mean_rate_);
            break;
        case BiasScheme::none:
            break;
        }
    }

    void mobility_step() {
        std::map<std::pair<NodeId, NodeId>, double> old_delta;
        if (scheme_.biased() && scheme_.maintenance == BiasMaintenance::neighbor)
            for (LinkId e = 0; e < net_.link_count(); ++e)
                old_delta[{net_.link(e).a, net_.link(e).b}] =
                    delta_.delta[static_cast<size_t>(e)];

        MobilityReport report =
            apply_mobility_step(net_, opts_.mobility.k_moving,
                                opts_.mobility.step_std, mobility_rng_);
        if (report.created.empty() && report.destroyed.empty()) return;
        conflict_ = build_conflict_graph(net_);
        refresh_bias_inputs();
        if (!scheme_.biased() || commodities_.empty()) return;
        if (scheme_.maintenance == BiasMaintenance::ideal) {
            bias_ = compute_biases_sssp(net_, delta_, commodities_);
        } else {
            // nodes react to any change on their incident links: created and
            // destroyed links, and surviving links whose per-hop distance
            // moved (duty cycles shift when the conflict graph changes)
            for (auto [a, b] : report.destroyed) {
                dirty_.mark_node_all_commodities(a);
                dirty_.mark_node_all_commodities(b);
            }
            for (LinkId e = 0; e < net_.link_count(); ++e) {
                const Link& l = net_.link(e);
                const auto old = old_delta.find({l.a, l.b});
                if (old != old_delta.end() &&
                    old->second == delta_.delta[static_cast<size_t>(e)])
                    continue;
                dirty_.mark_node_all_commodities(l.a);
                dirty_.mark_node_all_commodities(l.b);
            }
            // destinations stay pinned at zero
            for (size_t ci = 0; ci < commodities_.size(); ++ci)
                dirty_.mark[ci][static_cast<size_t>(commodities_[ci])] = 0;
        }
    }

    void step(int t) {
        if (opts_.mobility.period > 0 && t > 0 && t % opts_.mobility.period == 0)
            mobility_step();
        if (scheme_.biased() && scheme_.maintenance == BiasMaintenance::neighbor &&
            dirty_.any())
            neighbor_update_round(bias_, net_, delta_, &dirty_);

        const int n_comm = static_cast<int>(commodities_.size());

        // start-of-slot snapshot of queue state
        std::vector<std::vector<double>> u(
            static_cast<size_t>(n_comm),
            std::vector<double>(static_cast<size_t>(net_.node_count())));
        std::vector<int> len_before(static_cast<size_t>(net_.node_count()) *
                                    static_cast<size_t>(n_comm));
        for (int ci = 0; ci < n_comm; ++ci)
            for (NodeId v = 0; v < net_.node_count(); ++v) {
                const CommodityQueue& q = queues_.at(v, ci);
                len_before[static_cast<size_t>(v) * static_cast<size_t>(n_comm) +
                           static_cast<size_t>(ci)] = q.length();
                double g = q.backlog(scheme_.backlog, t);
                if (scheme_.biased())
                    g += bias_.at(ci, v);
                u[static_cast<size_t>(ci)][static_cast<size_t>(v)] = g;
            }

        std::vector<TransferEvent> no_transfers;
        std::vector<LinkDecision> decisions;
        TransferOutcome outcome;
        if (n_comm > 0) {
            const std::vector<int> rates = realize_rates(net_, opts_.rate_mode, rate_rng_);
            decisions = select_all(net_, u);
            assemble_utilities(decisions, rates);
            const std::vector<double> util = utility_vector(decisions);
            const Schedule schedule =
                scheme_.scheduler == SchedulerKind::exact
                    ? exact_mwis(conflict_, util, opts_.exact_cap)
                    : greedy_schedule(conflict_, util);
            if (!is_independent(conflict_, schedule.activated))
                throw std::logic_error("scheduler returned a conflicting set");
            allocate(decisions, schedule);
            outcome = execute_transfers(queues_, net_, commodities_, decisions, t);
            for (const Packet& p : outcome.delivered) {
                records_[static_cast<size_t>(p.id)].t1 = t;
                ++delivered_;
            }
        }

        // exogenous arrivals enter after transfers
        for (size_t fi = 0; fi < flows_.size(); ++fi) {
            const FlowSpec& f = flows_[fi];
            const int k = arrivals(f, t, traffic_rng_);
            const int ci = flow_ci_[fi];
            for (int i = 0; i < k; ++i) {
                Packet p;
                p.id = static_cast<std::int64_t>(records_.size());
                p.commodity = f.destination;
                p.origin = f.source;
                p.created_at = t;
                records_.push_back(PacketRecord{t, -1});
                queues_.at(f.source, ci).enqueue(p, t);
            }
            if (k > 0 && n_comm > 0) {
                auto& rx = outcome.deltas.rx;
                if (rx.empty())
                    rx.assign(static_cast<size_t>(net_.node_count()) *
                                  static_cast<size_t>(n_comm),
                              0);
                rx[static_cast<size_t>(f.source) * static_cast<size_t>(n_comm) +
                   static_cast<size_t>(ci)] += k;
            }
        }

        // expQ accumulators advance once per slot for every queue
        if (n_comm > 0) {
            if (outcome.deltas.tx.empty())
                outcome.deltas.tx.assign(len_before.size(), 0);
            if (outcome.deltas.rx.empty())
                outcome.deltas.rx.assign(len_before.size(), 0);
            for (NodeId v = 0; v < net_.node_count(); ++v)
                for (int ci = 0; ci < n_comm; ++ci) {
                    const size_t idx =
                        static_cast<size_t>(v) * static_cast<size_t>(n_comm) +
                        static_cast<size_t>(ci);
                    queues_.at(v, ci).update_expq(scheme_.backlog.eps,
                                                  len_before[idx],
                                                  outcome.deltas.tx[idx],
                                                  outcome.deltas.rx[idx]);
                }
        }

        occupancy_.push_back(static_cast<int>(queues_.total_packets()));

        // conservation: everything created is either queued or delivered
        if (queues_.total_packets() + delivered_ !=
            static_cast<std::int64_t>(records_.size()))
            throw std::logic_error("packet conservation violated");

        if (opts_.observer) {
            SlotView view{t,          net_,       queues_,
                          commodities_, decisions, outcome.transfers,
                          bias_};
            opts_.observer(view);
        }
    }

    SimResult finish() {
        SimResult r;
        r.slots = opts_.slots;
        r.created = static_cast<std::int64_t>(records_.size());
        r.delivered = delivered_;
        r.zero_packets = r.created == 0;
        double delay_sum = 0.0;
        for (const PacketRecord& p : records_)
            delay_sum += p.t1 >= 0 ? static_cast<double>(p.t1 - p.t0)
                                   : static_cast<double>(opts_.slots - p.t0);
        r.mean_delay = r.created > 0 ? delay_sum / static_cast<double>(r.created) : 0.0;
        r.delivery_rate =
            r.created > 0
                ? static_cast<double>(r.delivered) / static_cast<double>(r.created)
                : 0.0;
        r.occupancy = std::move(occupancy_);
        if (opts_.record_packets) r.packets = std::move(records_);
        return r;
    }

    Network net_;
    ConflictGraph conflict_;
    std::vector<FlowSpec> flows_;
    SchemeSpec scheme_;
    SimOptions opts_;
    Rng traffic_rng_, rate_rng_, mobility_rng_;

    std::vector<NodeId> commodities_;
    std::vector<int> flow_ci_;
    QueueGrid queues_;
    double mean_rate_ = 0.0;
    PerHopDistances delta_;
    BiasTable bias_;
    DirtyNodes dirty_;

    std::vector<PacketRecord> records_;
    std::int64_t delivered_ = 0;
    std::vector<int> occupancy_;
};

} // namespace

SimResult run_instance(const Network& net, const ConflictGraph& conflict,
                       const std::vector<FlowSpec>& flows,
                       const SchemeSpec& scheme, const SimOptions& opts,
                       std::uint64_t seed) {
    Simulation sim(net, conflict, flows, scheme, opts, seed);
    return sim.run();
}

namespace {

Network lemma1_network(double rate) {
    std::vector<Vec2> pos{{0.0, 0.0}, {1.0, 0.5}, {1.0, -0.5}, {2.0, 0.0}};
    Network net(std::move(pos), 1.2);
    for (LinkId e = 0; e < net.link_count(); ++e) net.set_rate(e, rate);
    return net;
}

Lemma1Run lemma1_run(const Network& net, const SchemeSpec& scheme,
                     const Lemma1Options& opts,
                     const std::vector<int>& hops_to_dest) {
    Lemma1Run run;
    int watched_link = -1;
    NodeId watched_from = -1, watched_to = -1;
    SimOptions sim_opts;
    sim_opts.slots = opts.slots;
    sim_opts.initial_packets = {{0, 3, opts.packets}};
    sim_opts.observer = [&](const SlotView& view) {
        for (const TransferEvent& ev : view.transfers) {
            run.transfers.push_back({view.t, ev});
            const int hf = hops_to_dest[static_cast<size_t>(ev.from)];
            const int ht = hops_to_dest[static_cast<size_t>(ev.to)];
            if (ht < hf) {
                if (run.first_forward_slot < 0) {
                    run.first_forward_slot = view.t;
                    watched_link = ev.link;
                    watched_from = ev.from;
                    watched_to = ev.to;
                }
            } else {
                run.all_forward = false;
                if (ht > hf && run.first_backward_slot < 0)
                    run.first_backward_slot = view.t;
            }
        }
        // Backpressure on the watched link as of the start of the next slot
        // (observer state at the end of slot t is the start-of-(t+1) state):
        // queue differential plus bias differential for the single commodity.
        if (watched_link >= 0 && view.t == run.first_forward_slot) {
            const double gi = view.queues.at(watched_from, 0).length();
            const double gj = view.queues.at(watched_to, 0).length();
            double bi = 0.0, bj = 0.0;
            if (scheme.biased()) {
                bi = view.bias.at(0, watched_from);
                bj = view.bias.at(0, watched_to);
            }
            run.scheduled_next_bp = (gi + bi) - (gj + bj);
        }
    };
    const ConflictGraph conflict = build_conflict_graph(net);
    SimResult res = run_instance(net, conflict, {}, scheme, sim_opts, 1);
    run.delivered = static_cast<int>(res.delivered);
    return run;
}

} // namespace

Lemma1Result run_lemma1(const Lemma1Options& opts) {
    if (opts.packets < 1 || static_cast<double>(opts.packets) > opts.rate)
        throw std::invalid_argument("run_lemma1: need 1 <= packets <= rate");
    Network net = lemma1_network(opts.rate);

    // hop distances to the destination node 3: A=2, B=1, C=1, D=0
    const std::vector<int> hops{2, 1, 1, 0};

    SchemeSpec biased;
    biased.backlog = {BacklogKind::queue_length, 0.0};
    biased.bias = BiasScheme::edr;
    SchemeSpec unbiased;
    unbiased.backlog = {BacklogKind::queue_length, 0.0};

    Lemma1Result result;
    result.rate = opts.rate;
    result.packets = opts.packets;
    result.biased = lemma1_run(net, biased, opts, hops);
    result.unbiased = lemma1_run(net, unbiased, opts, hops);

    result.biased_ok = result.biased.all_forward &&
                       result.biased.delivered == opts.packets &&
                       result.biased.first_backward_slot < 0;
    result.unbiased_reversal =
        result.unbiased.first_backward_slot >= 0 &&
        result.unbiased.first_forward_slot >= 0 &&
        result.unbiased.first_backward_slot - result.unbiased.first_forward_slot <= 2;
    result.pass = result.biased_ok && result.unbiased_reversal;
    return result;
}

} // namespace bp

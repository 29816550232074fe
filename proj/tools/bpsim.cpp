// bpsim: backpressure routing simulator CLI.
// Subcommands: run (single instance), sweep (grid experiment),
// mobility (bias maintenance comparison), lemma1 (four-node last-packet
// scenario checker).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bp/config.hpp"
#include "bp/sim.hpp"
#include "bp/sweep.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    bool seed_set = false;
    std::uint64_t seed = 1;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value)");
    cmd->add_option("--out", args.out_path, "output path (default: stdout)");
    cmd->add_option("--format", args.format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", args.seed, "master seed (overrides config)")
        ->trigger_on_parse()
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "worker threads (0: all cores)");
}

bp::ExperimentConfig load_config(const CommonArgs& args) {
    bp::ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = bp::parse_config_file(args.config_path);
    if (args.seed_set) cfg.seed = args.seed;
    if (args.threads >= 0) cfg.threads = args.threads;
    return cfg;
}

// Output is assembled in memory and written in one pass, so a failing run
// never leaves a partial file behind.
void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + out_path);
}

int cmd_run(const CommonArgs& args, const std::string& scheme_name,
            const std::string& net_path, const std::string& save_net_path,
            const std::string& flows_path, const std::string& save_flows_path,
            const std::string& slot_log_path, bool trace) {
    bp::ExperimentConfig cfg = load_config(args);
    const int nodes = cfg.sizes.front();

    bp::InstanceEnv env;
    if (!net_path.empty() || !flows_path.empty()) {
        env = bp::make_instance(cfg, nodes, 0, 0);
        if (!net_path.empty()) {
            env.net = bp::load_network(net_path);
            env.conflict = bp::build_conflict_graph(env.net);
            bp::Rng rng(bp::mix_seed(cfg.seed, 2, 0, 2));
            env.flows = bp::generate_flows(env.net, cfg.traffic, rng, cfg.traffic_cfg);
            env.sim_seed = bp::mix_seed(cfg.seed, 0x73696d, 1);
        }
        if (!flows_path.empty()) env.flows = bp::load_flows(flows_path);
    } else {
        env = bp::make_instance(cfg, nodes, 0, 0);
    }
    if (!save_net_path.empty()) bp::save_network(env.net, save_net_path);
    if (!save_flows_path.empty()) bp::save_flows(env.flows, save_flows_path);

    bp::SchemeSpec scheme = bp::parse_scheme(
        scheme_name.empty() ? cfg.scheme_names.front() : scheme_name, cfg);
    scheme.min_scale = cfg.a_values.front();

    bp::DutyCycles duty;
    bp::SimOptions opts;
    opts.slots = cfg.slots;
    opts.rate_mode = cfg.rate_mode;
    opts.mobility = cfg.mobility;
    if (!cfg.duty_cycle_file.empty()) {
        duty = bp::load_duty_cycles(env.net, cfg.duty_cycle_file);
        opts.duty_override = &duty;
    }

    std::ofstream slot_log;
    if (!slot_log_path.empty()) {
        slot_log.open(slot_log_path);
        if (!slot_log)
            throw std::runtime_error("cannot open slot log: " + slot_log_path);
        opts.observer = [&slot_log](const bp::SlotView& view) {
            for (const bp::TransferEvent& ev : view.transfers)
                slot_log << "t=" << view.t << " link=" << ev.link << " "
                         << ev.from << "->" << ev.to << " commodity="
                         << ev.commodity << " packets=" << ev.count << "\n";
        };
    }

    const bp::SimResult res = bp::run_instance(env.net, env.conflict, env.flows,
                                               scheme, opts, env.sim_seed);

    bp::ResultRow row;
    row.scheme = scheme.name();
    row.nodes = env.net.node_count();
    row.instances = 1;
    row.mean_delay = res.mean_delay;
    row.delivery_rate = res.delivery_rate;

    if (args.format == "json") {
        nlohmann::ordered_json o;
        o["scheme"] = row.scheme;
        o["nodes"] = row.nodes;
        o["slots"] = res.slots;
        o["created"] = res.created;
        o["delivered"] = res.delivered;
        o["mean_delay"] = res.mean_delay;
        o["delivery_rate"] = res.delivery_rate;
        o["zero_packets"] = res.zero_packets;
        if (trace) {
            nlohmann::ordered_json packets = nlohmann::ordered_json::array();
            for (const bp::PacketRecord& p : res.packets)
                packets.push_back({{"t0", p.t0}, {"t1", p.t1}});
            o["packets"] = packets;
        }
        emit(o.dump(2) + "\n", args.out_path);
    } else {
        emit(bp::to_csv({row}, bp::TableKind::sweep), args.out_path);
    }
    return 0;
}

int cmd_sweep(const CommonArgs& args, bool mobility) {
    bp::ExperimentConfig cfg = load_config(args);
    const bp::SweepData data =
        mobility ? bp::run_mobility_experiment(cfg) : bp::run_sweep(cfg);
    const bp::TableKind kind =
        mobility ? bp::TableKind::mobility : bp::TableKind::sweep;
    emit(args.format == "json" ? bp::to_json(data.rows, kind)
                               : bp::to_csv(data.rows, kind),
         args.out_path);
    return 0;
}

int cmd_lemma1(const CommonArgs& args, double rate, int packets) {
    bp::Lemma1Options opts;
    opts.rate = rate;
    opts.packets = packets;
    const bp::Lemma1Result res = bp::run_lemma1(opts);

    std::string text;
    auto describe = [&](const char* label, const bp::Lemma1Run& run) {
        text += std::string(label) + ":\n";
        for (const auto& [slot, ev] : run.transfers) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "  t=%d  %d->%d  packets=%d (link %d)\n", slot, ev.from,
                          ev.to, ev.count, ev.link);
            text += buf;
        }
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "  delivered=%d first_forward=%d first_backward=%d "
                      "next_slot_backpressure=%g\n",
                      run.delivered, run.first_forward_slot,
                      run.first_backward_slot, run.scheduled_next_bp);
        text += buf;
    };
    describe("biased (per-hop distance = link rate)", res.biased);
    describe("unbiased (no bias)", res.unbiased);
    text += std::string("biased forward-only delivery: ") +
            (res.biased_ok ? "PASS" : "FAIL") + "\n";
    text += std::string("unbiased reversal within 2 slots: ") +
            (res.unbiased_reversal ? "PASS" : "FAIL") + "\n";

    if (args.format == "json") {
        nlohmann::ordered_json o;
        o["rate"] = res.rate;
        o["packets"] = res.packets;
        o["biased_ok"] = res.biased_ok;
        o["unbiased_reversal"] = res.unbiased_reversal;
        o["pass"] = res.pass;
        emit(o.dump(2) + "\n", args.out_path);
    } else {
        emit(text, args.out_path);
    }
    return res.pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"backpressure routing simulator"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, mob_args, lemma_args;
    std::string scheme_name, net_path, save_net_path, flows_path,
        save_flows_path, slot_log_path;
    bool trace = false;
    double lemma_rate = 26.0;
    int lemma_packets = 20;

    CLI::App* run = app.add_subcommand("run", "run a single instance");
    add_common(run, run_args);
    run->add_option("--scheme", scheme_name, "scheme name (default: first in config)");
    run->add_option("--network", net_path, "load network fixture instead of generating");
    run->add_option("--save-network", save_net_path, "write the network fixture");
    run->add_option("--flows", flows_path, "load flow fixture instead of generating");
    run->add_option("--save-flows", save_flows_path, "write the flow fixture");
    run->add_option("--slot-log", slot_log_path, "write per-slot transfer log");
    run->add_flag("--trace", trace, "include per-packet records (json only)");

    CLI::App* sweep = app.add_subcommand("sweep", "run an experiment grid");
    add_common(sweep, sweep_args);

    CLI::App* mobility =
        app.add_subcommand("mobility", "compare ideal vs neighbor bias updates");
    add_common(mobility, mob_args);

    CLI::App* lemma = app.add_subcommand("lemma1", "four-node last-packet check");
    add_common(lemma, lemma_args);
    lemma->add_option("--rate", lemma_rate, "uniform link rate");
    lemma->add_option("--packets", lemma_packets, "staged packet count q (<= rate)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(run_args, scheme_name, net_path, save_net_path,
                           flows_path, save_flows_path, slot_log_path, trace);
        if (sweep->parsed()) return cmd_sweep(sweep_args, false);
        if (mobility->parsed()) return cmd_sweep(mob_args, true);
        if (lemma->parsed()) return cmd_lemma1(lemma_args, lemma_rate, lemma_packets);
    } catch (const bp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

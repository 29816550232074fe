#include "bp/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "json.hpp"

namespace bp {

namespace {

struct Stats {
    int n = 0;
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation
};

Stats summarize(const std::vector<double>& xs) {
    Stats s;
    s.n = static_cast<int>(xs.size());
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / s.n;
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / (s.n - 1));
    }
    return s;
}

} // namespace

void parallel_for(int n_jobs, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : static_cast<int>(hw);
    }
    threads = std::min(threads, n_jobs);
    if (threads <= 1) {
        for (int i = 0; i < n_jobs; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::mutex err_mutex;
    std::exception_ptr first_error;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n_jobs) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

InstanceEnv make_instance(const ExperimentConfig& cfg, int n_nodes, int net_idx,
                          int real_idx) {
    GenerateOptions gen;
    gen.connect_radius = cfg.connect_radius;
    gen.interference_radius = cfg.interference_radius;

    const std::uint64_t net_seed =
        mix_seed(cfg.seed, static_cast<std::uint64_t>(n_nodes),
                 static_cast<std::uint64_t>(net_idx), 1);
    InstanceEnv env{generate_network(n_nodes, net_seed, cfg.target_degree, gen),
                    {},
                    {},
                    0};

    // One realization = fresh link rates + fresh flow set on the same topology.
    const std::uint64_t real_seed =
        mix_seed(cfg.seed, static_cast<std::uint64_t>(n_nodes),
                 static_cast<std::uint64_t>(net_idx),
                 2 + static_cast<std::uint64_t>(real_idx));
    Rng rng(real_seed);
    for (LinkId e = 0; e < env.net.link_count(); ++e)
        env.net.set_rate(e, rng.uniform(gen.rate_lo, gen.rate_hi));
    env.flows = generate_flows(env.net, cfg.traffic, rng, cfg.traffic_cfg);
    env.conflict = build_conflict_graph(env.net);
    env.sim_seed = mix_seed(real_seed, 0x73696d);
    return env;
}

namespace {

struct Cell {
    SchemeSpec scheme;
    std::string scheme_name;
    std::string bias_update;
    int nodes = 0;
};

SweepData run_grid(const ExperimentConfig& cfg, const std::vector<Cell>& cells,
                   const MobilityConfig& mobility) {
    // cells that share `nodes` share instances; group jobs by (nodes, instance)
    std::vector<int> sizes;
    for (const Cell& c : cells)
        if (std::find(sizes.begin(), sizes.end(), c.nodes) == sizes.end())
            sizes.push_back(c.nodes);

    const int per_size = cfg.networks * cfg.realizations;
    const int n_jobs = static_cast<int>(sizes.size()) * per_size;

    std::vector<std::vector<InstanceOutcome>> outcomes(
        cells.size(), std::vector<InstanceOutcome>(static_cast<size_t>(per_size)));

    parallel_for(n_jobs, cfg.threads, [&](int job) {
        const int size_idx = job / per_size;
        const int inst_idx = job % per_size;
        const int n_nodes = sizes[static_cast<size_t>(size_idx)];
        const int net_idx = inst_idx / cfg.realizations;
        const int real_idx = inst_idx % cfg.realizations;

        InstanceEnv env;
        try {
            env = make_instance(cfg, n_nodes, net_idx, real_idx);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "instance (n=%d net=%d real=%d) failed: %s\n",
                         n_nodes, net_idx, real_idx, e.what());
            return; // all cells of this instance stay !ok
        }

        DutyCycles duty;
        const bool has_duty_file = !cfg.duty_cycle_file.empty();
        if (has_duty_file) duty = load_duty_cycles(env.net, cfg.duty_cycle_file);

        for (size_t c = 0; c < cells.size(); ++c) {
            if (cells[c].nodes != n_nodes) continue;
            SimOptions opts;
            opts.slots = cfg.slots;
            opts.rate_mode = cfg.rate_mode;
            opts.mobility = mobility;
            opts.record_packets = false;
            if (has_duty_file) opts.duty_override = &duty;
            try {
                const SimResult r = run_instance(env.net, env.conflict, env.flows,
                                                 cells[c].scheme, opts, env.sim_seed);
                outcomes[c][static_cast<size_t>(inst_idx)] =
                    InstanceOutcome{true, r.mean_delay, r.delivery_rate};
            } catch (const std::exception& e) {
                std::fprintf(stderr,
                             "run (scheme=%s n=%d net=%d real=%d) failed: %s\n",
                             cells[c].scheme_name.c_str(), n_nodes, net_idx,
                             real_idx, e.what());
            }
        }
    });

    SweepData data;
    for (size_t c = 0; c < cells.size(); ++c) {
        std::vector<double> delays, deliveries;
        for (const InstanceOutcome& o : outcomes[c]) {
            if (!o.ok) continue;
            delays.push_back(o.mean_delay);
            deliveries.push_back(o.delivery_rate);
        }
        const Stats d = summarize(delays);
        const Stats v = summarize(deliveries);
        ResultRow row;
        row.scheme = cells[c].scheme_name;
        row.bias_update = cells[c].bias_update;
        row.nodes = cells[c].nodes;
        row.instances = d.n;
        row.mean_delay = d.mean;
        row.delay_std = d.stddev;
        row.delay_ci95 = d.n > 1 ? 1.96 * d.stddev / std::sqrt(d.n) : 0.0;
        row.delivery_rate = v.mean;
        row.delivery_std = v.stddev;
        data.rows.push_back(row);
        data.outcomes.push_back(std::move(outcomes[c]));
    }
    return data;
}

} // namespace

SweepData run_sweep(const ExperimentConfig& cfg) {
    std::vector<Cell> cells;
    for (int nodes : cfg.sizes)
        for (double a : cfg.a_values)
            for (const std::string& name : cfg.scheme_names) {
                Cell cell;
                cell.scheme = parse_scheme(name, cfg);
                cell.scheme.min_scale = a;
                cell.scheme_name = cell.scheme.name();
                cell.nodes = nodes;
                cells.push_back(cell);
            }
    return run_grid(cfg, cells, MobilityConfig{}); // static topology
}

SweepData run_mobility_experiment(const ExperimentConfig& cfg) {
    if (cfg.mobility.period <= 0)
        throw ConfigError("mobility experiment requires mobility_period > 0");
    std::vector<Cell> cells;
    for (int nodes : cfg.sizes)
        for (const std::string& name : cfg.scheme_names)
            for (BiasMaintenance mode :
                 {BiasMaintenance::ideal, BiasMaintenance::neighbor}) {
                Cell cell;
                cell.scheme = parse_scheme(name, cfg);
                cell.scheme.maintenance = mode;
                cell.scheme_name = cell.scheme.name();
                cell.bias_update =
                    mode == BiasMaintenance::ideal ? "ideal" : "neighbor";
                cell.nodes = nodes;
                cells.push_back(cell);
            }
    return run_grid(cfg, cells, cfg.mobility);
}

namespace {
std::string format_row(const ResultRow& r, TableKind kind) {
    char buf[320];
    if (kind == TableKind::sweep) {
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%.6f,%.6f,%.6f,%.6f\n",
                      r.scheme.c_str(), r.nodes, r.instances, r.mean_delay,
                      r.delay_ci95, r.delivery_rate, r.delivery_std);
    } else {
        std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%.6f,%.6f,%.6f,%.6f\n",
                      r.scheme.c_str(), r.bias_update.c_str(), r.nodes,
                      r.instances, r.mean_delay, r.delay_std, r.delivery_rate,
                      r.delivery_std);
    }
    return buf;
}
} // namespace

std::string to_csv(const std::vector<ResultRow>& rows, TableKind kind) {
    std::string out =
        kind == TableKind::sweep
            ? "scheme,nodes,instances,mean_delay,delay_ci95,delivery_rate,delivery_std\n"
            : "scheme,bias_update,nodes,instances,mean_delay,delay_std,delivery_rate,"
              "delivery_std\n";
    for (const ResultRow& r : rows) out += format_row(r, kind);
    return out;
}

std::string to_json(const std::vector<ResultRow>& rows, TableKind kind) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ResultRow& r : rows) {
        nlohmann::ordered_json o;
        o["scheme"] = r.scheme;
        if (kind == TableKind::mobility) o["bias_update"] = r.bias_update;
        o["nodes"] = r.nodes;
        o["instances"] = r.instances;
        o["mean_delay"] = r.mean_delay;
        if (kind == TableKind::sweep)
            o["delay_ci95"] = r.delay_ci95;
        else
            o["delay_std"] = r.delay_std;
        o["delivery_rate"] = r.delivery_rate;
        o["delivery_std"] = r.delivery_std;
        arr.push_back(o);
    }
    return arr.dump(2) + "\n";
}

} // namespace bp

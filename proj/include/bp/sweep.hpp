#pragma once

#include <string>
#include <vector>

#include "bp/config.hpp"
#include "bp/sim.hpp"

namespace bp {

// One aggregated table cell: a scheme at one grid point.
struct ResultRow {
    std::string scheme;
    std::string bias_update; // empty outside the mobility experiment
    int nodes = 0;
    int instances = 0; // instances that completed
    double mean_delay = 0.0;
    double delay_ci95 = 0.0;
    double delay_std = 0.0;
    double delivery_rate = 0.0;
    double delivery_std = 0.0;
};

// Per-instance outcome, exposed for tests that need raw sweep data.
struct InstanceOutcome {
    bool ok = false;
    double mean_delay = 0.0;
    double delivery_rate = 0.0;
};

struct SweepData {
    std::vector<ResultRow> rows;
    // outcomes[row][instance], aligned with rows
    std::vector<std::vector<InstanceOutcome>> outcomes;
};

// Grid: sizes x a_values x schemes; `networks x realizations` instances per
// point. All schemes (and all a values) see identical network, rate, flow and
// arrival realizations, so comparisons are paired. Row order is
// deterministic regardless of thread count.
SweepData run_sweep(const ExperimentConfig& cfg);

// Every scheme under both bias-maintenance modes, with mobility enabled.
// Rows carry bias_update = ideal|neighbor.
SweepData run_mobility_experiment(const ExperimentConfig& cfg);

enum class TableKind { sweep, mobility };

std::string to_csv(const std::vector<ResultRow>& rows, TableKind kind);
std::string to_json(const std::vector<ResultRow>& rows, TableKind kind);

// Environment of one test instance, shared by every scheme at a grid point.
struct InstanceEnv {
    Network net;
    ConflictGraph conflict;
    std::vector<FlowSpec> flows;
    std::uint64_t sim_seed = 0;
};

InstanceEnv make_instance(const ExperimentConfig& cfg, int n_nodes, int net_idx,
                          int real_idx);

void parallel_for(int n_jobs, int threads, const std::function<void(int)>& fn);

} // namespace bp

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <ftsim/dag.hpp>
#include <ftsim/device.hpp>
#include <ftsim/engine.hpp>
#include <ftsim/error.hpp>
#include <ftsim/policy.hpp>
#include <ftsim/rng.hpp>
#include <ftsim/timing.hpp>

namespace ftsim {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct IntRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

struct DagShape {
    IntRange task_count{5, 15};
    double edge_probability = 0.3;
};

// Everything one simulated scenario needs. Defaults follow the task and device
// parameter tables; the remaining knobs are modelling choices.
struct ScenarioConfig {
    std::size_t app_count = 50;
    Range instructions{20000.0, 100000.0};
    Range data_size{0.5, 10.0};
    DagShape dag;

    IntRange device_count{20, 50};
    Range cpu_speed{1000.0, 100000.0};
    Range cpu_utilization{0.2, 1.0};
    Range battery{0.2, 1.0};
    Range avail_time{1000.0, 30000.0};
    WeibullParams weibull{1.21, 94.08};
    std::optional<Range> mtbf;  // when set, each device's Weibull scale is chosen to hit a sampled mean
    Range bandwidth_wifi{0.9, 1.2};
    double ether_probability = 0.0;
    Range bandwidth_ether{10.0, 12.5};
    Range latency{0.005, 0.02};
    double per_conn_rate = 0.05;
    IntRange conn_count{0, 4};
    IntRange tasks_total{10, 100};
    Range fail_ratio{0.05, 0.5};

    DeviceSpec source = default_source();
    WeightsConfig weights;
    double repair_delay = 10.0;
    double snapshot_ratio = 1.0;
    std::optional<double> checkpoint_cost;
    double min_checkpoint_interval = 1.0;
    double instruction_scale = 1.0;  // converts generated counts into simulated work
    double computation_scale = 1.0;  // sweep multiplier of task computation
    bool failures_enabled = true;
    bool enforce_avail_window = true;

    std::uint64_t seed = 1;
    std::vector<Strategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};

    static DeviceSpec default_source() {
        DeviceSpec s;
        s.id = kSourceDevice;
        s.cpu_speed = 1000.0;
        s.cpu_utilization = 1.0;
        s.bandwidth_wifi = 1.2;
        s.latency = 0.005;
        return s;
    }

    CostModel cost_model() const {
        CostModel cm;
        cm.source = source;
        cm.snapshot_ratio = snapshot_ratio;
        cm.checkpoint_cost = checkpoint_cost;
        cm.min_checkpoint_interval = min_checkpoint_interval;
        return cm;
    }

    SimConfig sim_config(std::uint64_t failure_key) const {
        SimConfig sc;
        sc.costs = cost_model();
        sc.repair_delay = repair_delay;
        sc.failures_enabled = failures_enabled;
        sc.enforce_avail_window = enforce_avail_window;
        sc.failure_key = failure_key;
        return sc;
    }
};

inline void validate(const ScenarioConfig& c) {
    auto check = [](bool ok, const char* what) {
        if (!ok) throw InvalidInput(std::string("scenario: ") + what);
    };
    auto range = [&](const Range& r, const char* what) { check(r.lo <= r.hi, what); };
    auto irange = [&](const IntRange& r, const char* what) { check(r.lo <= r.hi, what); };
    check(c.app_count >= 1, "app_count must be >= 1");
    range(c.instructions, "instructions range is empty");
    check(c.instructions.lo > 0.0, "instructions must be > 0");
    range(c.data_size, "data_size range is empty");
    check(c.data_size.lo >= 0.0, "data_size must be >= 0");
    irange(c.dag.task_count, "task_count range is empty");
    check(c.dag.task_count.lo >= 1, "task_count must be >= 1");
    check(c.dag.edge_probability >= 0.0 && c.dag.edge_probability <= 1.0, "edge_probability must lie in [0, 1]");
    irange(c.device_count, "device_count range is empty");
    check(c.device_count.lo >= 1, "device_count must be >= 1");
    range(c.cpu_speed, "cpu_speed range is empty");
    check(c.cpu_speed.lo > 0.0, "cpu_speed must be > 0");
    range(c.cpu_utilization, "cpu_utilization range is empty");
    check(c.cpu_utilization.lo > 0.0 && c.cpu_utilization.hi <= 1.0, "cpu_utilization must lie in (0, 1]");
    range(c.battery, "battery range is empty");
    check(c.battery.lo >= 0.0 && c.battery.hi <= 1.0, "battery must lie in [0, 1]");
    range(c.avail_time, "avail_time range is empty");
    validate(c.weibull);
    if (c.mtbf) {
        range(*c.mtbf, "mtbf range is empty");
        check(c.mtbf->lo > 0.0, "mtbf must be > 0");
    }
    range(c.bandwidth_wifi, "bandwidth_wifi range is empty");
    range(c.bandwidth_ether, "bandwidth_ether range is empty");
    range(c.latency, "latency range is empty");
    irange(c.conn_count, "conn_count range is empty");
    check(c.conn_count.lo >= 0, "conn_count must be >= 0");
    irange(c.tasks_total, "tasks_total range is empty");
    check(c.tasks_total.lo >= 0, "tasks_total must be >= 0");
    range(c.fail_ratio, "fail_ratio range is empty");
    check(c.fail_ratio.lo >= 0.0 && c.fail_ratio.hi <= 1.0, "fail_ratio must lie in [0, 1]");
    validate(c.weights);
    check(c.repair_delay >= 0.0, "repair_delay must be >= 0");
    check(c.snapshot_ratio >= 0.0, "snapshot_ratio must be >= 0");
    check(!c.checkpoint_cost || *c.checkpoint_cost >= 0.0, "checkpoint_cost must be >= 0");
    check(c.min_checkpoint_interval > 0.0, "min_checkpoint_interval must be > 0");
    check(c.instruction_scale > 0.0 && c.computation_scale > 0.0, "scales must be > 0");
    check(!c.strategies.empty(), "at least one strategy is required");
}

// Random application DAG; edges only run from lower to higher index, so the
// result is acyclic by construction.
inline AppDag gen_dag(const ScenarioConfig& cfg, Rng& rng) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(cfg.dag.task_count.lo, cfg.dag.task_count.hi));
    std::vector<TaskSpec> tasks(n);
    for (std::size_t i = 0; i < n; ++i) {
        tasks[i].id = TaskId{static_cast<std::uint32_t>(i + 1)};
        tasks[i].instructions = rng.uniform(cfg.instructions.lo, cfg.instructions.hi);
        tasks[i].data_size = rng.uniform(cfg.data_size.lo, cfg.data_size.hi);
    }
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (rng.bernoulli(cfg.dag.edge_probability)) tasks[j].deps.push_back(tasks[i].id);
        }
    }
    return validate_dag(std::move(tasks));
}

inline DevicePopulation gen_devices(const ScenarioConfig& cfg, std::uint64_t seed) {
    Rng rng(derive_seed(seed, Stream::Devices));
    Rng mtbf_rng(derive_seed(seed, Stream::DeviceMtbf));
    const auto n = static_cast<std::size_t>(rng.uniform_int(cfg.device_count.lo, cfg.device_count.hi));
    std::vector<DeviceSpec> devs(n);
    for (std::size_t i = 0; i < n; ++i) {
        DeviceSpec& d = devs[i];
        d.id = DeviceId{static_cast<std::uint32_t>(i + 1)};
        d.cpu_speed = rng.uniform(cfg.cpu_speed.lo, cfg.cpu_speed.hi);
        d.cpu_utilization = rng.uniform(cfg.cpu_utilization.lo, cfg.cpu_utilization.hi);
        d.battery = rng.uniform(cfg.battery.lo, cfg.battery.hi);
        d.has_wifi = true;
        d.bandwidth_wifi = rng.uniform(cfg.bandwidth_wifi.lo, cfg.bandwidth_wifi.hi);
        d.has_ether = rng.bernoulli(cfg.ether_probability);
        const double ether = rng.uniform(cfg.bandwidth_ether.lo, cfg.bandwidth_ether.hi);
        d.bandwidth_ether = d.has_ether ? ether : 0.0;
        d.latency = rng.uniform(cfg.latency.lo, cfg.latency.hi);
        d.avail_time = rng.uniform(cfg.avail_time.lo, cfg.avail_time.hi);
        d.per_conn_rate = cfg.per_conn_rate;
        d.conn_count = static_cast<std::uint32_t>(rng.uniform_int(cfg.conn_count.lo, cfg.conn_count.hi));
        d.tasks_total = static_cast<std::uint32_t>(rng.uniform_int(cfg.tasks_total.lo, cfg.tasks_total.hi));
        d.tasks_failed = static_cast<std::uint32_t>(
            std::round(rng.uniform(cfg.fail_ratio.lo, cfg.fail_ratio.hi) * d.tasks_total));
        d.peers_connected = static_cast<std::uint32_t>(
            rng.uniform_int(std::min<std::int64_t>(1, static_cast<std::int64_t>(n) - 1), static_cast<std::int64_t>(n) - 1));

        d.failure.shape = cfg.weibull.shape;
        if (cfg.mtbf) {
            d.mtbf = mtbf_rng.uniform(cfg.mtbf->lo, cfg.mtbf->hi);
            d.failure.scale = weibull_scale_for_mean(cfg.weibull.shape, d.mtbf);
        } else {
            d.failure.scale = cfg.weibull.scale;
            d.mtbf = weibull_mean(d.failure);
        }
    }
    return DevicePopulation(std::move(devs));
}

inline AppDag scale_instructions(const AppDag& dag, double factor) {
    std::vector<TaskSpec> tasks = dag.tasks();
    for (TaskSpec& t : tasks) t.instructions *= factor;
    return validate_dag(std::move(tasks));
}

// Greedy earliest-finish-time placement in topological order; lowest device id
// wins ties. Every task is offloaded.
inline SchedulePlan baseline_schedule(const AppDag& dag, const DevicePopulation& devices, const DeviceSpec& source) {
    if (devices.size() == 0) throw InvalidInput("baseline_schedule: no devices");
    SchedulePlan plan;
    std::vector<double> ready(devices.size(), 0.0);
    std::vector<double> finish(dag.size(), 0.0);
    for (std::size_t i : dag.topo_order()) {
        const TaskSpec& t = dag.task(i);
        double deps_done = 0.0;
        for (std::size_t p : dag.preds(i)) deps_done = std::max(deps_done, finish[p]);

        std::optional<std::size_t> best;
        double best_finish = std::numeric_limits<double>::infinity();
        for (std::size_t d = 0; d < devices.size(); ++d) {
            const DeviceSpec& dev = devices.all()[d];
            if (!(link_rate(source, dev) > 0.0)) continue;
            const double f = std::max(ready[d], deps_done) + transfer_time(t.data_size, source, dev) + exec_time(t, dev);
            if (f < best_finish || (f == best_finish && dev.id < devices.all()[*best].id)) {
                best = d;
                best_finish = f;
            }
        }
        if (!best) throw NoRoute("no device reachable from the source for task " + t.id.str());
        ready[*best] = best_finish;
        finish[i] = best_finish;
        plan.assignments[t.id] = devices.all()[*best].id;
        plan.offload_set.insert(t.id);
    }
    return plan;
}

struct Workload {
    DevicePopulation devices;
    std::vector<AppDag> apps;  // instruction counts as generated, before scaling
};

// Pure function of (config, seed).
inline Workload generate_workload(const ScenarioConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    Workload w;
    w.devices = gen_devices(cfg, seed);
    for (std::size_t a = 0; a < cfg.app_count; ++a) {
        Rng rng(derive_seed(seed, Stream::Dag, {a}));
        w.apps.push_back(gen_dag(cfg, rng));
    }
    return w;
}

struct AppRun {
    MetricsReport metrics;
    RunResult detail;  // trace and busy intervals only when requested
};

struct ScenarioResult {
    double completion_time = 0.0;  // mean application completion time
    double overhead_time = 0.0;    // summed over applications
    std::uint64_t ft_messages = 0; // summed over applications
    std::vector<MetricsReport> per_app;
    std::vector<RunResult> traces;  // filled when keep_traces
};

// Runs every application of the workload under one strategy. Application `a`
// draws its failures from substream (seed, a), identical across strategies.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg, const Workload& w, Strategy strategy,
                                   std::uint64_t seed, bool keep_traces = false) {
    const CostModel cm = cfg.cost_model();
    ScenarioResult out;
    double total_completion = 0.0;
    for (std::size_t a = 0; a < w.apps.size(); ++a) {
        const AppDag dag = scale_instructions(w.apps[a], cfg.instruction_scale * cfg.computation_scale);
        const SchedulePlan plan = baseline_schedule(dag, w.devices, cfg.source);
        const PolicyAssignment pol = build_policies(strategy, w.devices, dag, plan, cfg.weights, cm, seed);
        SimConfig sc = cfg.sim_config(a);
        sc.record_trace = keep_traces;
        RunResult r = run(dag, w.devices, plan, pol, strategy, sc, seed);
        total_completion += r.metrics.completion_time;
        out.overhead_time += r.metrics.overhead_time;
        out.ft_messages += r.metrics.ft_messages;
        out.per_app.push_back(r.metrics);
        if (keep_traces) out.traces.push_back(std::move(r));
    }
    out.completion_time = w.apps.empty() ? 0.0 : total_completion / static_cast<double>(w.apps.size());
    return out;
}

} // namespace ftsim

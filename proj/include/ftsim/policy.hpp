#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <variant>
#include <vector>

#include <ftsim/clustering.hpp>
#include <ftsim/dag.hpp>
#include <ftsim/device.hpp>
#include <ftsim/error.hpp>
#include <ftsim/timing.hpp>

namespace ftsim {

// Task offloading schedule plan: where each offloaded task runs. Tasks outside
// the offload set run locally on the source device.
struct SchedulePlan {
    std::map<TaskId, DeviceId> assignments;
    std::set<TaskId> offload_set;

    DeviceId device_of(TaskId t) const {
        auto it = assignments.find(t);
        if (it == assignments.end()) throw InvalidInput("task " + t.str() + " has no assigned device");
        return it->second;
    }
    bool offloaded(TaskId t) const { return offload_set.count(t) != 0; }
};

class DevicePopulation {
public:
    DevicePopulation() = default;
    explicit DevicePopulation(std::vector<DeviceSpec> devices) : devices_(std::move(devices)) {
        for (std::size_t i = 0; i < devices_.size(); ++i) {
            if (!index_.emplace(devices_[i].id, i).second) {
                throw InvalidInput("duplicate device id " + devices_[i].id.str());
            }
        }
        for (const DeviceSpec& d : devices_) validate(d, devices_.size());
    }

    const std::vector<DeviceSpec>& all() const { return devices_; }
    std::size_t size() const { return devices_.size(); }
    bool contains(DeviceId id) const { return index_.count(id) != 0; }
    std::size_t index_of(DeviceId id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw InvalidInput("unknown device id " + id.str());
        return it->second;
    }
    const DeviceSpec& get(DeviceId id) const { return devices_[index_of(id)]; }

private:
    std::vector<DeviceSpec> devices_;
    std::unordered_map<DeviceId, std::size_t> index_;
};

inline void validate(const SchedulePlan& plan, const AppDag& dag, const DevicePopulation& devices) {
    for (TaskId t : plan.offload_set) {
        if (!dag.contains(t)) throw InvalidInput("offloaded task " + t.str() + " is not in the DAG");
        if (plan.assignments.count(t) == 0) {
            throw InvalidInput("offloaded task " + t.str() + " has no assignment");
        }
    }
    for (const auto& [t, d] : plan.assignments) {
        if (!dag.contains(t)) throw InvalidInput("assigned task " + t.str() + " is not in the DAG");
        if (!devices.contains(d)) {
            throw InvalidInput("task " + t.str() + " assigned to unknown device " + d.str());
        }
    }
}

struct NoPolicy {
    friend bool operator==(const NoPolicy&, const NoPolicy&) = default;
};
struct Replicate {
    DeviceId replica_device;
    friend bool operator==(const Replicate&, const Replicate&) = default;
};
struct Checkpoint {
    double interval = 1.0;  // seconds of task progress between snapshots
    double cost = 0.0;      // checkpoint pause before the snapshot transfer, seconds
    friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};
using Policy = std::variant<NoPolicy, Replicate, Checkpoint>;

struct PolicyAssignment {
    std::map<TaskId, Policy> per_task;

    const Policy& of(TaskId t) const {
        static const Policy none = NoPolicy{};
        auto it = per_task.find(t);
        return it == per_task.end() ? none : it->second;
    }
};

// Everything needed to cost a checkpoint or a replica for a task.
struct CostModel {
    DeviceSpec source;             // origin of inputs and store for snapshots
    double snapshot_ratio = 1.0;   // snapshot size / task data size
    std::optional<double> checkpoint_cost;  // fixed pause; otherwise snapshot / link rate
    double min_checkpoint_interval = 1.0;
};

// Pause spent saving one snapshot of `task` running on `dev`.
inline double checkpoint_cost(const TaskSpec& task, const DeviceSpec& dev, const CostModel& cm) {
    if (cm.checkpoint_cost) return *cm.checkpoint_cost;
    const double rate = link_rate(dev, cm.source);
    if (!(rate > 0.0)) throw NoRoute("device " + dev.id.str() + " cannot reach the checkpoint store");
    return cm.snapshot_ratio * task.data_size / rate;
}

// Young's first-order optimum interval between checkpoints.
inline double checkpoint_interval(double ckpt_cost, double time_between_failures) {
    if (ckpt_cost < 0.0 || !(time_between_failures > 0.0)) {
        throw InvalidInput("checkpoint_interval: need cost >= 0 and time between failures > 0");
    }
    return std::sqrt(2.0 * ckpt_cost * time_between_failures);
}

inline double replication_score(const DeviceSpec& dev, double task_time, std::size_t cluster_size,
                                const WeightsConfig& w) {
    if (cluster_size == 0) throw InvalidInput("replication_score: cluster_size must be >= 1");
    const double fail_ratio = dev.tasks_total == 0
                                  ? 0.0
                                  : static_cast<double>(dev.tasks_failed) / static_cast<double>(dev.tasks_total);
    const double conn_ratio = static_cast<double>(dev.peers_connected) / static_cast<double>(cluster_size);
    return (w.score_y * task_time) * (w.score_z * fail_ratio) * (w.score_lambda * conn_ratio);
}

// Estimated time for `dev` to receive and run a copy of `task`.
inline double replica_task_time(const TaskSpec& task, const DeviceSpec& dev, const CostModel& cm) {
    return exec_time(task, dev) + transfer_time(task.data_size, cm.source, dev);
}

struct PolicyCounters {
    std::uint64_t reliability_evals = 0;
    std::uint64_t score_evals = 0;
    std::uint64_t max_score_evals_per_task = 0;
    std::uint64_t critical_tasks = 0;
};

// Lowest-scoring device of `cluster` other than the primary; ties go to the
// lowest id. Candidates unreachable from the source are skipped.
inline DeviceId select_replica_device(const std::vector<const DeviceSpec*>& cluster, const TaskSpec& task,
                                      DeviceId primary, const WeightsConfig& w, const CostModel& cm,
                                      PolicyCounters* counters = nullptr) {
    std::optional<DeviceId> best;
    double best_score = std::numeric_limits<double>::infinity();
    std::uint64_t evals = 0;
    for (const DeviceSpec* dev : cluster) {
        if (dev->id == primary) continue;
        if (!(link_rate(cm.source, *dev) > 0.0)) continue;
        const double s = replication_score(*dev, replica_task_time(task, *dev, cm), cluster.size(), w);
        ++evals;
        if (!best || s < best_score || (s == best_score && dev->id < *best)) {
            best = dev->id;
            best_score = s;
        }
    }
    if (counters) {
        counters->score_evals += evals;
        counters->max_score_evals_per_task = std::max(counters->max_score_evals_per_task, evals);
    }
    if (!best) throw NoCandidate("no replica host for task " + task.id.str() + " besides device " + primary.str());
    return *best;
}

inline const DeviceSpec& host_of(TaskId t, const SchedulePlan& plan, const DevicePopulation& devices,
                                 const CostModel& cm) {
    return plan.offloaded(t) ? devices.get(plan.device_of(t)) : cm.source;
}

// Execution time of every task on the device the plan puts it on.
inline ExecTimes planned_exec_times(const AppDag& dag, const SchedulePlan& plan,
                                    const DevicePopulation& devices, const CostModel& cm) {
    ExecTimes et;
    for (const TaskSpec& t : dag.tasks()) et[t.id] = exec_time(t, host_of(t.id, plan, devices, cm));
    return et;
}

inline Checkpoint checkpoint_policy(const TaskSpec& task, const DeviceSpec& dev, const CostModel& cm) {
    const double cost = checkpoint_cost(task, dev, cm);
    const double tc = checkpoint_interval(cost, weibull_mean(dev.failure));
    return Checkpoint{std::max(tc, cm.min_checkpoint_interval), cost};
}

struct PolicyDiagnostics {
    ClusterSplit clusters;
    std::vector<TaskId> critical;
    std::vector<double> reliability;  // aligned with DevicePopulation::all()
};

// Cluster-adaptive assignment: critical offloaded tasks hosted in the
// low-reliability cluster get a replica inside that cluster, those hosted in
// the high-reliability cluster get checkpoints, everything else runs bare.
inline PolicyAssignment assign_policies(const DevicePopulation& devices, const AppDag& dag,
                                        const SchedulePlan& plan, const WeightsConfig& w,
                                        const CostModel& cm, std::uint64_t seed = 0,
                                        PolicyCounters* counters = nullptr,
                                        PolicyDiagnostics* diag = nullptr) {
    validate(plan, dag, devices);
    PolicyAssignment out;

    std::vector<DeviceId> ids;
    std::vector<double> rel;
    for (const DeviceSpec& d : devices.all()) {
        ids.push_back(d.id);
        rel.push_back(reliability(d, w).reliability);
        if (counters) ++counters->reliability_evals;
    }
    ClusterSplit split;
    if (!ids.empty()) split = split_by_reliability(ids, rel, seed);

    const ScheduleTimes times = compute_schedule_times(dag, planned_exec_times(dag, plan, devices, cm));
    const std::vector<TaskId> cp = critical_path(dag, times);
    const std::set<TaskId> critical(cp.begin(), cp.end());

    std::vector<const DeviceSpec*> low_cluster;
    for (DeviceId id : split.low) low_cluster.push_back(&devices.get(id));

    for (TaskId t : plan.offload_set) {
        if (critical.count(t) == 0) {
            out.per_task[t] = NoPolicy{};
            continue;
        }
        if (counters) ++counters->critical_tasks;
        const TaskSpec& task = dag.task(t);
        const DeviceSpec& host = devices.get(plan.device_of(t));
        if (split.in_low(host.id)) {
            try {
                out.per_task[t] = Replicate{select_replica_device(low_cluster, task, host.id, w, cm, counters)};
                continue;
            } catch (const NoCandidate&) {
                // fall through to checkpointing on the primary
            }
        }
        out.per_task[t] = checkpoint_policy(task, host, cm);
    }

    if (diag) {
        diag->clusters = std::move(split);
        diag->critical = cp;
        diag->reliability = std::move(rel);
    }
    return out;
}

} // namespace ftsim

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include <ftsim/error.hpp>
#include <ftsim/ids.hpp>

namespace ftsim {

struct TaskSpec {
    TaskId id;
    double instructions = 1.0;  // raw machine instructions
    double data_size = 0.0;     // MB
    std::vector<TaskId> deps;
};

// Validated application graph. Construct through validate_dag().
class AppDag {
public:
    AppDag() = default;

    const std::vector<TaskSpec>& tasks() const { return tasks_; }
    std::size_t size() const { return tasks_.size(); }
    const TaskSpec& task(std::size_t idx) const { return tasks_[idx]; }
    const TaskSpec& task(TaskId id) const { return tasks_[index_of(id)]; }

    std::size_t index_of(TaskId id) const {
        auto it = index_.find(id);
        if (it == index_.end()) {
            throw InvalidInput("unknown task id " + id.str());
        }
        return it->second;
    }
    bool contains(TaskId id) const { return index_.count(id) != 0; }

    // Task indices in a deterministic topological order (ties by input position).
    const std::vector<std::size_t>& topo_order() const { return topo_; }
    const std::vector<std::size_t>& preds(std::size_t idx) const { return preds_[idx]; }
    const std::vector<std::size_t>& succs(std::size_t idx) const { return succs_[idx]; }

private:
    friend AppDag validate_dag(std::vector<TaskSpec> tasks);

    std::vector<TaskSpec> tasks_;
    std::unordered_map<TaskId, std::size_t> index_;
    std::vector<std::vector<std::size_t>> preds_;
    std::vector<std::vector<std::size_t>> succs_;
    std::vector<std::size_t> topo_;
};

inline AppDag validate_dag(std::vector<TaskSpec> tasks) {
    AppDag dag;
    const std::size_t n = tasks.size();
    for (std::size_t i = 0; i < n; ++i) {
        const TaskSpec& t = tasks[i];
        if (!(t.instructions > 0.0)) {
            throw InvalidInput("task " + t.id.str() + ": instructions must be > 0");
        }
        if (!(t.data_size >= 0.0)) {
            throw InvalidInput("task " + t.id.str() + ": data_size must be >= 0");
        }
        if (!dag.index_.emplace(t.id, i).second) {
            throw DuplicateTaskId("duplicate task id " + t.id.str());
        }
    }

    dag.preds_.assign(n, {});
    dag.succs_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t>& p = dag.preds_[i];
        for (TaskId dep : tasks[i].deps) {
            if (dep == tasks[i].id) {
                throw CycleDetected("task " + dep.str() + " depends on itself");
            }
            auto it = dag.index_.find(dep);
            if (it == dag.index_.end()) {
                throw UnknownDependency("task " + tasks[i].id.str() +
                                        " depends on unknown task " + dep.str());
            }
            p.push_back(it->second);
        }
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
        for (std::size_t j : p) dag.succs_[j].push_back(i);
    }

    std::vector<std::size_t> indeg(n);
    for (std::size_t i = 0; i < n; ++i) indeg[i] = dag.preds_[i].size();
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indeg[i] == 0) ready.push(i);
    }
    while (!ready.empty()) {
        std::size_t i = ready.top();
        ready.pop();
        dag.topo_.push_back(i);
        for (std::size_t s : dag.succs_[i]) {
            if (--indeg[s] == 0) ready.push(s);
        }
    }

    if (dag.topo_.size() != n) {
        // Walk backwards through unresolved predecessors until a node repeats;
        // that node lies on a cycle.
        std::size_t cur = 0;
        while (indeg[cur] == 0) ++cur;
        std::vector<bool> seen(n, false);
        while (!seen[cur]) {
            seen[cur] = true;
            for (std::size_t p : dag.preds_[cur]) {
                if (indeg[p] != 0) {
                    cur = p;
                    break;
                }
            }
        }
        throw CycleDetected("dependency cycle through task " + tasks[cur].id.str());
    }

    dag.tasks_ = std::move(tasks);
    return dag;
}

inline constexpr double kCriticalFloatTolerance = 1e-9;

struct TaskTimes {
    double earliest_start = 0.0;
    double earliest_finish = 0.0;
    double latest_start = 0.0;
    double latest_finish = 0.0;
    double total_float = 0.0;
    bool on_critical_path = false;
};

struct ScheduleTimes {
    std::vector<TaskTimes> per_task;  // indexed like AppDag::tasks()
    double makespan = 0.0;
};

using ExecTimes = std::unordered_map<TaskId, double>;

// Forward/backward pass over the DAG weighted by per-task execution time.
inline ScheduleTimes compute_schedule_times(const AppDag& dag, const ExecTimes& exec_time) {
    const std::size_t n = dag.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = exec_time.find(dag.task(i).id);
        if (it == exec_time.end()) {
            throw MissingExecTime("no execution time for task " + dag.task(i).id.str());
        }
        if (!(it->second > 0.0)) {
            throw InvalidInput("execution time of task " + dag.task(i).id.str() +
                               " must be positive");
        }
        w[i] = it->second;
    }

    ScheduleTimes st;
    st.per_task.resize(n);
    for (std::size_t i : dag.topo_order()) {
        double es = 0.0;
        for (std::size_t p : dag.preds(i)) es = std::max(es, st.per_task[p].earliest_finish);
        st.per_task[i].earliest_start = es;
        st.per_task[i].earliest_finish = es + w[i];
        st.makespan = std::max(st.makespan, es + w[i]);
    }

    const auto& order = dag.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t i = *it;
        double lf = st.makespan;
        for (std::size_t s : dag.succs(i)) lf = std::min(lf, st.per_task[s].latest_start);
        TaskTimes& tt = st.per_task[i];
        tt.latest_finish = lf;
        tt.latest_start = lf - w[i];
        tt.total_float = std::max(0.0, tt.latest_finish - tt.earliest_finish);
        tt.on_critical_path = tt.total_float <= kCriticalFloatTolerance;
    }
    return st;
}

// Every task with zero total float; ties between equally long paths put all of
// their tasks in the set.
inline std::vector<TaskId> critical_path(const AppDag& dag, const ScheduleTimes& times) {
    std::vector<TaskId> out;
    for (std::size_t i : dag.topo_order()) {
        if (times.per_task.at(i).on_critical_path) out.push_back(dag.task(i).id);
    }
    return out;
}

} // namespace ftsim

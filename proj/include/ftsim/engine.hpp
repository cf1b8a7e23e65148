#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include <ftsim/dag.hpp>
#include <ftsim/device.hpp>
#include <ftsim/error.hpp>
#include <ftsim/policy.hpp>
#include <ftsim/rng.hpp>
#include <ftsim/timing.hpp>

namespace ftsim {

enum class Strategy { FtAlgo, CheckpointOnly, ReplicateOnly, NoFt };

inline constexpr std::array<Strategy, 4> kAllStrategies = {Strategy::FtAlgo, Strategy::CheckpointOnly,
                                                           Strategy::ReplicateOnly, Strategy::NoFt};

inline std::string_view to_string(Strategy s) {
    switch (s) {
    case Strategy::FtAlgo: return "FT_ALGO";
    case Strategy::CheckpointOnly: return "CHECKPOINT_ONLY";
    case Strategy::ReplicateOnly: return "REPLICATE_ONLY";
    case Strategy::NoFt: return "NO_FT";
    }
    return "?";
}

inline Strategy parse_strategy(std::string_view s) {
    for (Strategy st : kAllStrategies) {
        if (s == to_string(st)) return st;
    }
    if (s == "FT_Algo" || s == "ft") return Strategy::FtAlgo;
    if (s == "C*" || s == "checkpoint") return Strategy::CheckpointOnly;
    if (s == "R*" || s == "replicate") return Strategy::ReplicateOnly;
    if (s == "NoFT*" || s == "noft") return Strategy::NoFt;
    throw InvalidInput("unknown strategy '" + std::string(s) + "'");
}

// Policies a strategy applies to the offloaded tasks of a plan.
inline PolicyAssignment build_policies(Strategy s, const DevicePopulation& devices, const AppDag& dag,
                                       const SchedulePlan& plan, const WeightsConfig& w, const CostModel& cm,
                                       std::uint64_t seed = 0, PolicyCounters* counters = nullptr) {
    validate(plan, dag, devices);
    PolicyAssignment out;
    switch (s) {
    case Strategy::FtAlgo:
        return assign_policies(devices, dag, plan, w, cm, seed, counters);
    case Strategy::NoFt:
        for (TaskId t : plan.offload_set) out.per_task[t] = NoPolicy{};
        break;
    case Strategy::CheckpointOnly:
        for (TaskId t : plan.offload_set) {
            out.per_task[t] = checkpoint_policy(dag.task(t), devices.get(plan.device_of(t)), cm);
        }
        break;
    case Strategy::ReplicateOnly: {
        std::vector<const DeviceSpec*> everyone;
        for (const DeviceSpec& d : devices.all()) everyone.push_back(&d);
        for (TaskId t : plan.offload_set) {
            try {
                out.per_task[t] = Replicate{select_replica_device(everyone, dag.task(t), plan.device_of(t), w, cm)};
            } catch (const NoCandidate&) {
                out.per_task[t] = NoPolicy{};
            }
        }
        break;
    }
    }
    return out;
}

// Reserved id of the application's origin device in traces.
inline constexpr DeviceId kSourceDevice{std::numeric_limits<std::uint32_t>::max()};

enum class EventKind {
    DeviceFail,
    TaskComplete,
    CheckpointWrite,
    TaskStart,
    DeviceRepair,
    ReplicaDispatch,
    ReplicaCancel,
    RestartRequest,
};

inline std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::DeviceFail: return "DeviceFail";
    case EventKind::TaskComplete: return "TaskComplete";
    case EventKind::CheckpointWrite: return "CheckpointWrite";
    case EventKind::TaskStart: return "TaskStart";
    case EventKind::DeviceRepair: return "DeviceRepair";
    case EventKind::ReplicaDispatch: return "ReplicaDispatch";
    case EventKind::ReplicaCancel: return "ReplicaCancel";
    case EventKind::RestartRequest: return "RestartRequest";
    }
    return "?";
}

inline bool is_ft_message(EventKind k) {
    return k == EventKind::CheckpointWrite || k == EventKind::ReplicaDispatch || k == EventKind::ReplicaCancel;
}

struct SimEvent {
    double time = 0.0;
    EventKind kind = EventKind::TaskStart;
    std::optional<TaskId> task;
    std::optional<DeviceId> device;
    bool replica = false;
};

inline std::string format_event(const SimEvent& e) {
    char buf[160];
    const std::string task = e.task ? e.task->str() : "-";
    const std::string dev = !e.device ? "-" : (*e.device == kSourceDevice ? "source" : e.device->str());
    std::snprintf(buf, sizeof buf, "%.9f %s task=%s device=%s copy=%s", e.time,
                  std::string(to_string(e.kind)).c_str(), task.c_str(), dev.c_str(),
                  e.replica ? "replica" : "primary");
    return buf;
}

inline std::string format_trace(const std::vector<SimEvent>& trace) {
    std::string out;
    for (const SimEvent& e : trace) {
        out += format_event(e);
        out += '\n';
    }
    return out;
}

struct MetricsReport {
    double completion_time = 0.0;  // time of the last TaskComplete
    double overhead_time = 0.0;    // checkpoint pauses + snapshot transfers + replica transfers + loser compute
    std::uint64_t ft_messages = 0; // CheckpointWrite + ReplicaDispatch + ReplicaCancel
    std::uint64_t checkpoints = 0;
    std::uint64_t replicas = 0;
    std::uint64_t failures = 0;
    std::uint64_t restarts = 0;
};

struct BusyInterval {
    DeviceId device;
    TaskId task;
    bool replica = false;
    double start = 0.0;
    double end = 0.0;
};

struct RunResult {
    MetricsReport metrics;
    std::vector<SimEvent> trace;
    std::vector<BusyInterval> busy;
    std::vector<double> task_finish;  // indexed like AppDag::tasks()
};

struct SimConfig {
    CostModel costs;
    double repair_delay = 10.0;
    bool failures_enabled = true;
    bool enforce_avail_window = true;  // a device leaves for good at its avail_time
    double time_limit = 1e8;
    bool record_trace = true;
    std::uint64_t failure_key = 0;  // distinguishes independent applications under one seed
};

// Failure instants of one device: up-time ~ Weibull, then `repair` seconds down.
class FailureSchedule {
public:
    FailureSchedule(WeibullParams law, double repair, std::uint64_t stream_seed)
        : law_(law), repair_(repair), rng_(stream_seed) {}

    // k-th failure instant (0-based), sampled on demand.
    double at(std::size_t k) {
        while (times_.size() <= k) {
            const double base = times_.empty() ? 0.0 : times_.back() + repair_;
            times_.push_back(base + sample_failure_time(law_, rng_));
        }
        return times_[k];
    }

    const std::vector<double>& sampled() const { return times_; }

private:
    WeibullParams law_;
    double repair_;
    Rng rng_;
    std::vector<double> times_;
};

inline std::uint64_t failure_stream_seed(std::uint64_t seed, std::uint64_t failure_key, DeviceId dev) {
    return derive_seed(seed, Stream::Failures, {failure_key, dev.value});
}

namespace detail {

class Simulator {
public:
    Simulator(const AppDag& dag, const DevicePopulation& devices, const SchedulePlan& plan,
              const PolicyAssignment& policy, const SimConfig& cfg, std::uint64_t seed)
        : dag_(dag), devices_(devices), plan_(plan), policy_(policy), cfg_(cfg) {
        const std::size_t n = devices.size();
        hosts_.resize(n + 1);
        for (std::size_t h = 0; h < n; ++h) {
            const DeviceSpec& d = devices.all()[h];
            hosts_[h].spec = &d;
            hosts_[h].failures.emplace(d.failure, cfg.repair_delay, failure_stream_seed(seed, cfg.failure_key, d.id));
        }
        source_ = cfg.costs.source;
        source_.id = kSourceDevice;
        hosts_[n].spec = &source_;
        hosts_[n].is_source = true;

        topo_pos_.resize(dag.size());
        for (std::size_t k = 0; k < dag.topo_order().size(); ++k) topo_pos_[dag.topo_order()[k]] = k;

        tasks_.resize(dag.size());
        for (std::size_t i : dag.topo_order()) {
            const TaskSpec& t = dag.task(i);
            const std::size_t h = plan.offloaded(t.id) ? devices.index_of(plan.device_of(t.id)) : n;
            tasks_[i].deps_left = dag.preds(i).size();
            tasks_[i].primary = new_copy(i, h, false);
            hosts_[h].primaries.push_back(tasks_[i].primary);
        }
        result_.task_finish.assign(dag.size(), 0.0);
    }

    RunResult run() {
        for (std::size_t h = 0; h + 1 < hosts_.size(); ++h) {
            schedule_next_failure(h, 0);
            if (cfg_.enforce_avail_window) push({hosts_[h].spec->avail_time, kRankFail, hosts_[h].spec->id.value,
                                                QueueType::Depart, h, 0, 0});
        }
        for (std::size_t h = 0; h < hosts_.size(); ++h) dispatch(h, 0.0);

        while (done_count_ < tasks_.size()) {
            if (queue_.empty()) throw DeadlockDetected("event queue drained with tasks outstanding");
            const QueueEntry e = queue_.top();
            queue_.pop();
            if (e.time > cfg_.time_limit) throw Error("simulation exceeded its time limit");
            switch (e.type) {
            case QueueType::Fail: on_fail(e.host, e.time, false); break;
            case QueueType::Depart: on_fail(e.host, e.time, true); break;
            case QueueType::Repair: on_repair(e.host, e.time); break;
            case QueueType::PhaseEnd: on_phase_end(e.copy, e.epoch, e.time); break;
            }
            if (done_count_ < tasks_.size() && stalled()) {
                throw DeadlockDetected("no runnable task and no pending work at t=" + std::to_string(e.time));
            }
        }
        return std::move(result_);
    }

private:
    enum class Phase { Fetch, Execute, Snapshot };
    enum class CopyState { Queued, Running, Done, Cancelled };

    struct Copy {
        std::size_t task = 0;
        std::size_t host = 0;
        bool replica = false;
        std::optional<Checkpoint> ckpt;
        CopyState state = CopyState::Queued;
        Phase phase = Phase::Fetch;
        bool fresh_phase = true;       // phase_remaining must be recomputed
        double phase_remaining = 0.0;
        double phase_started = 0.0;
        double fetch_duration = 0.0;
        double progress = 0.0;         // executed seconds
        double segment_target = 0.0;
        std::uint64_t ckpts_done = 0;
        bool interrupted = false;
        bool started_once = false;
        bool fetch_accounted = false;
        std::uint64_t epoch = 0;
        double busy_since = 0.0;
    };

    struct TaskState {
        std::size_t deps_left = 0;
        bool done = false;
        std::size_t primary = 0;
        std::optional<std::size_t> replica;
    };

    struct Host {
        const DeviceSpec* spec = nullptr;
        bool is_source = false;
        bool up = true;
        bool departed = false;
        std::optional<std::size_t> running;
        std::vector<std::size_t> primaries;  // plan order
        std::deque<std::size_t> replicas;    // FIFO, behind primary work
        std::optional<FailureSchedule> failures;
        std::size_t next_failure = 0;
    };

    enum class QueueType { Fail, Depart, PhaseEnd, Repair };
    static constexpr int kRankFail = 0;
    static constexpr int kRankPhase = 1;
    static constexpr int kRankRepair = 2;

    struct QueueEntry {
        double time;
        int rank;
        std::uint32_t id;
        QueueType type;
        std::size_t host;
        std::size_t copy;
        std::uint64_t epoch;
        std::uint64_t seq = 0;
    };
    struct Later {
        bool operator()(const QueueEntry& a, const QueueEntry& b) const {
            if (a.time != b.time) return a.time > b.time;
            if (a.rank != b.rank) return a.rank > b.rank;
            if (a.id != b.id) return a.id > b.id;
            return a.seq > b.seq;
        }
    };

    static constexpr double kEps = 1e-12;

    const AppDag& dag_;
    const DevicePopulation& devices_;
    const SchedulePlan& plan_;
    const PolicyAssignment& policy_;
    const SimConfig& cfg_;
    DeviceSpec source_;
    std::vector<Host> hosts_;
    std::vector<Copy> copies_;
    std::vector<TaskState> tasks_;
    std::vector<std::size_t> topo_pos_;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, Later> queue_;
    std::uint64_t seq_ = 0;
    std::size_t done_count_ = 0;
    RunResult result_;

    void push(QueueEntry e) {
        e.seq = seq_++;
        queue_.push(e);
    }

    TaskId task_id(std::size_t i) const { return dag_.task(i).id; }
    DeviceId host_id(std::size_t h) const { return hosts_[h].spec->id; }

    void trace(double t, EventKind k, std::optional<std::size_t> task, std::size_t host, bool replica) {
        if (is_ft_message(k)) ++result_.metrics.ft_messages;
        if (!cfg_.record_trace) return;
        SimEvent e;
        e.time = t;
        e.kind = k;
        if (task) e.task = task_id(*task);
        e.device = host_id(host);
        e.replica = replica;
        result_.trace.push_back(e);
    }

    std::size_t new_copy(std::size_t task, std::size_t host, bool replica) {
        Copy c;
        c.task = task;
        c.host = host;
        c.replica = replica;
        if (!replica && !hosts_[host].is_source) {
            if (const auto* ck = std::get_if<Checkpoint>(&policy_.of(task_id(task)))) c.ckpt = *ck;
        }
        copies_.push_back(c);
        return copies_.size() - 1;
    }

    double exec_total(const Copy& c) const { return exec_time(dag_.task(c.task), *hosts_[c.host].spec); }

    void schedule_next_failure(std::size_t h, double not_before) {
        Host& host = hosts_[h];
        if (!cfg_.failures_enabled || host.departed) return;
        double t = host.failures->at(host.next_failure);
        while (t < not_before) t = host.failures->at(++host.next_failure);
        ++host.next_failure;
        if (cfg_.enforce_avail_window && t >= host.spec->avail_time) return;
        push({t, kRankFail, host.spec->id.value, QueueType::Fail, h, 0, 0});
    }

    bool task_ready(std::size_t task) const { return tasks_[task].deps_left == 0 && !tasks_[task].done; }

    std::optional<std::size_t> head_primary(const Host& h) const {
        for (std::size_t c : h.primaries) {
            const CopyState s = copies_[c].state;
            if (s == CopyState::Queued || s == CopyState::Running) return c;
        }
        return std::nullopt;
    }

    bool has_work(const Host& h) const {
        if (head_primary(h)) return true;
        return std::any_of(h.replicas.begin(), h.replicas.end(),
                           [&](std::size_t c) { return copies_[c].state == CopyState::Queued; });
    }

    bool stalled() const {
        for (const Host& h : hosts_) {
            if (h.running) return false;
            if (!h.up && !h.departed && has_work(h)) return false;
        }
        return true;
    }

    void dispatch(std::size_t h, double now) {
        Host& host = hosts_[h];
        if (!host.up) return;
        const std::optional<std::size_t> head = head_primary(host);
        const bool head_startable =
            head && copies_[*head].state == CopyState::Queued && task_ready(copies_[*head].task);

        if (host.running) {
            Copy& cur = copies_[*host.running];
            if (!cur.replica || !head_startable) return;
            suspend(*host.running, now);
            host.replicas.push_front(*host.running);
            host.running.reset();
        }
        if (head_startable) {
            start(*head, now);
            return;
        }
        while (!host.replicas.empty()) {
            const std::size_t c = host.replicas.front();
            host.replicas.pop_front();
            if (copies_[c].state == CopyState::Queued) {
                start(c, now);
                return;
            }
        }
    }

    void close_busy(const Copy& c, double now) {
        if (!cfg_.record_trace) return;
        result_.busy.push_back({host_id(c.host), task_id(c.task), c.replica, c.busy_since, now});
    }

    void start(std::size_t ci, double now) {
        Copy& c = copies_[ci];
        Host& host = hosts_[c.host];
        c.state = CopyState::Running;
        c.busy_since = now;
        host.running = ci;
        if (c.interrupted) {
            ++result_.metrics.restarts;
            trace(now, EventKind::RestartRequest, c.task, c.host, c.replica);
            c.interrupted = false;
        }
        trace(now, EventKind::TaskStart, c.task, c.host, c.replica);

        const bool first = !c.started_once;
        c.started_once = true;
        begin_phase(ci, now);

        if (first && !c.replica) {
            if (const auto* rep = std::get_if<Replicate>(&policy_.of(task_id(c.task)))) {
                const std::size_t rh = devices_.index_of(rep->replica_device);
                if (!hosts_[rh].departed) {
                    const std::size_t ri = new_copy(c.task, rh, true);
                    tasks_[copies_[ri].task].replica = ri;
                    ++result_.metrics.replicas;
                    trace(now, EventKind::ReplicaDispatch, copies_[ri].task, rh, true);
                    hosts_[rh].replicas.push_back(ri);
                    dispatch(rh, now);
                }
            }
        }
    }

    // Set up the current phase (if needed) and schedule its end.
    void begin_phase(std::size_t ci, double now) {
        Copy& c = copies_[ci];
        if (c.fresh_phase) {
            c.fresh_phase = false;
            switch (c.phase) {
            case Phase::Fetch: {
                if (hosts_[c.host].is_source) {
                    c.phase_remaining = 0.0;
                } else {
                    const double size = dag_.task(c.task).data_size *
                                        (c.ckpts_done > 0 ? cfg_.costs.snapshot_ratio : 1.0);
                    c.phase_remaining = transfer_time(size, source_, *hosts_[c.host].spec);
                }
                c.fetch_duration = c.phase_remaining;
                break;
            }
            case Phase::Execute: {
                const double total = exec_total(c);
                double target = total;
                if (c.ckpt) {
                    const double boundary = static_cast<double>(c.ckpts_done + 1) * c.ckpt->interval;
                    if (boundary < total - kEps) target = boundary;
                }
                c.segment_target = target;
                c.phase_remaining = std::max(0.0, target - c.progress);
                break;
            }
            case Phase::Snapshot: {
                const double size = dag_.task(c.task).data_size * cfg_.costs.snapshot_ratio;
                c.phase_remaining = c.ckpt->cost + transfer_time(size, *hosts_[c.host].spec, source_);
                break;
            }
            }
        }
        c.phase_started = now;
        push({now + c.phase_remaining, kRankPhase, task_id(c.task).value, QueueType::PhaseEnd, c.host, ci, c.epoch});
    }

    void suspend(std::size_t ci, double now) {
        Copy& c = copies_[ci];
        const double elapsed = now - c.phase_started;
        c.phase_remaining = std::max(0.0, c.phase_remaining - elapsed);
        if (c.phase == Phase::Execute) c.progress += elapsed;
        ++c.epoch;
        c.state = CopyState::Queued;
        close_busy(c, now);
    }

    // Work done in the current attempt is lost except what the last
    // checkpoint preserved.
    void reset_after_failure(Copy& c) {
        ++c.epoch;
        c.progress = c.ckpt ? static_cast<double>(c.ckpts_done) * c.ckpt->interval : 0.0;
        if (!c.ckpt) c.ckpts_done = 0;
        c.phase = Phase::Fetch;
        c.fresh_phase = true;
        c.interrupted = true;
    }

    void on_phase_end(std::size_t ci, std::uint64_t epoch, double now) {
        Copy& c = copies_[ci];
        if (c.epoch != epoch || c.state != CopyState::Running) return;
        switch (c.phase) {
        case Phase::Fetch:
            if (c.replica && !c.fetch_accounted) {
                result_.metrics.overhead_time += c.fetch_duration;
                c.fetch_accounted = true;
            }
            c.phase = Phase::Execute;
            c.fresh_phase = true;
            begin_phase(ci, now);
            return;
        case Phase::Execute:
            c.progress = c.segment_target;
            if (c.progress >= exec_total(c) - kEps) {
                complete(ci, now);
                return;
            }
            c.phase = Phase::Snapshot;
            c.fresh_phase = true;
            ++result_.metrics.checkpoints;
            trace(now, EventKind::CheckpointWrite, c.task, c.host, false);
            begin_phase(ci, now);
            return;
        case Phase::Snapshot: {
            const double size = dag_.task(c.task).data_size * cfg_.costs.snapshot_ratio;
            result_.metrics.overhead_time += c.ckpt->cost + transfer_time(size, *hosts_[c.host].spec, source_);
            ++c.ckpts_done;
            c.phase = Phase::Execute;
            c.fresh_phase = true;
            begin_phase(ci, now);
            return;
        }
        }
    }

    void complete(std::size_t ci, double now) {
        Copy& c = copies_[ci];
        const std::size_t ti = c.task;
        TaskState& ts = tasks_[ti];
        c.state = CopyState::Done;
        ++c.epoch;
        close_busy(c, now);
        hosts_[c.host].running.reset();
        ts.done = true;
        ++done_count_;
        result_.task_finish[ti] = now;
        result_.metrics.completion_time = std::max(result_.metrics.completion_time, now);
        trace(now, EventKind::TaskComplete, ti, c.host, c.replica);

        std::vector<std::size_t> to_dispatch{c.host};
        const std::optional<std::size_t> other = c.replica ? std::optional(ts.primary) : ts.replica;
        if (other) {
            Copy& o = copies_[*other];
            if (o.state == CopyState::Queued || o.state == CopyState::Running) {
                double consumed = o.progress;
                if (o.state == CopyState::Running) {
                    if (o.phase == Phase::Execute) consumed += now - o.phase_started;
                    close_busy(o, now);
                    hosts_[o.host].running.reset();
                    to_dispatch.push_back(o.host);
                }
                o.state = CopyState::Cancelled;
                ++o.epoch;
                result_.metrics.overhead_time += consumed;
                trace(now, EventKind::ReplicaCancel, ti, o.host, o.replica);
            }
        }
        for (std::size_t s : dag_.succs(ti)) {
            if (--tasks_[s].deps_left == 0) to_dispatch.push_back(copies_[tasks_[s].primary].host);
        }
        for (std::size_t h : to_dispatch) dispatch(h, now);
    }

    void on_fail(std::size_t h, double now, bool departure) {
        Host& host = hosts_[h];
        if (host.departed) return;
        if (!departure && !host.up) return;
        ++result_.metrics.failures;
        trace(now, EventKind::DeviceFail, std::nullopt, h, false);
        host.up = false;

        if (host.running) {
            Copy& c = copies_[*host.running];
            close_busy(c, now);
            c.state = CopyState::Queued;
            reset_after_failure(c);
            if (c.replica) host.replicas.push_front(*host.running);
            host.running.reset();
        }
        for (std::size_t ci : host.replicas) {
            Copy& c = copies_[ci];
            if (c.state == CopyState::Queued && c.started_once && !c.interrupted) reset_after_failure(c);
        }

        if (!departure) {
            push({now + cfg_.repair_delay, kRankRepair, host.spec->id.value, QueueType::Repair, h, 0, 0});
            return;
        }

        host.departed = true;
        // Leftover primaries fall back to local execution on the source.
        const std::size_t src = hosts_.size() - 1;
        for (std::size_t ci : host.primaries) {
            Copy& c = copies_[ci];
            if (c.state != CopyState::Queued) continue;
            Copy moved = c;
            c.state = CopyState::Cancelled;
            moved.host = src;
            moved.ckpt.reset();
            moved.progress = 0.0;
            moved.ckpts_done = 0;
            moved.phase = Phase::Fetch;
            moved.fresh_phase = true;
            moved.epoch = 0;
            copies_.push_back(moved);
            const std::size_t ni = copies_.size() - 1;
            tasks_[moved.task].primary = ni;
            auto& q = hosts_[src].primaries;
            auto pos = std::find_if(q.begin(), q.end(), [&](std::size_t x) {
                return topo_pos_[copies_[x].task] > topo_pos_[moved.task];
            });
            q.insert(pos, ni);
        }
        for (std::size_t ci : host.replicas) {
            if (copies_[ci].state == CopyState::Queued) {
                copies_[ci].state = CopyState::Cancelled;
                tasks_[copies_[ci].task].replica.reset();
            }
        }
        host.replicas.clear();
        dispatch(src, now);
    }

    void on_repair(std::size_t h, double now) {
        Host& host = hosts_[h];
        if (host.departed) return;
        host.up = true;
        trace(now, EventKind::DeviceRepair, std::nullopt, h, false);
        schedule_next_failure(h, now);
        dispatch(h, now);
    }
};

} // namespace detail

// Executes one scheduled application under failure injection.
inline RunResult run(const AppDag& dag, const DevicePopulation& devices, const SchedulePlan& plan,
                     const PolicyAssignment& policy, Strategy strategy, const SimConfig& cfg,
                     std::uint64_t seed) {
    validate(plan, dag, devices);
    if (strategy == Strategy::NoFt) {
        for (const auto& [t, p] : policy.per_task) {
            if (!std::holds_alternative<NoPolicy>(p)) {
                throw InvalidInput("NO_FT run given a fault-tolerance policy for task " + t.str());
            }
        }
    }
    for (const auto& [t, p] : policy.per_task) {
        if (const auto* r = std::get_if<Replicate>(&p)) {
            if (!devices.contains(r->replica_device)) {
                throw InvalidInput("replica of task " + t.str() + " targets unknown device");
            }
            if (plan.offloaded(t) && plan.device_of(t) == r->replica_device) {
                throw InvalidInput("replica of task " + t.str() + " targets its primary device");
            }
        }
        if (const auto* c = std::get_if<Checkpoint>(&p); c && !(c->interval > 0.0)) {
            throw InvalidInput("checkpoint interval of task " + t.str() + " must be > 0");
        }
    }
    detail::Simulator sim(dag, devices, plan, policy, cfg, seed);
    return sim.run();
}

} // namespace ftsim

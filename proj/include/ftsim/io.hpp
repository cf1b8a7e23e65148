#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <ftsim/dag.hpp>
#include <ftsim/device.hpp>
#include <ftsim/engine.hpp>
#include <ftsim/error.hpp>
#include <ftsim/experiment.hpp>
#include <ftsim/policy.hpp>
#include <ftsim/workload.hpp>

// JSON encodings of the model inputs. Readers reject unknown keys so a typo in
// a config file fails loudly instead of silently falling back to a default.
namespace ftsim::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw InvalidInput(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw InvalidInput(where + ": unknown key '" + it.key() + "'");
    }
}

template <class T>
void opt(const Json& j, const char* key, T& out, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        out = it->template get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(where + "." + key + ": " + e.what());
    }
}

template <class T>
T req(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw InvalidInput(where + ": missing key '" + key + "'");
    T out{};
    opt(j, key, out, where);
    return out;
}

inline Range range(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InvalidInput(where + ": expected [lo, hi]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline IntRange int_range(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
        throw InvalidInput(where + ": expected integer [lo, hi]");
    }
    return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

inline void opt_range(const Json& j, const char* key, Range& out, const std::string& where) {
    if (j.contains(key)) out = range(j[key], where + "." + key);
}

inline void opt_int_range(const Json& j, const char* key, IntRange& out, const std::string& where) {
    if (j.contains(key)) out = int_range(j[key], where + "." + key);
}

inline Json to_json(const Range& r) { return Json::array({r.lo, r.hi}); }
inline Json to_json(const IntRange& r) { return Json::array({r.lo, r.hi}); }

} // namespace detail

// ---- DAG ----

inline Json dag_to_json(const AppDag& dag) {
    Json tasks = Json::array();
    for (const TaskSpec& t : dag.tasks()) {
        Json deps = Json::array();
        for (TaskId d : t.deps) deps.push_back(d.value);
        tasks.push_back({{"id", t.id.value}, {"instructions", t.instructions}, {"data_size", t.data_size}, {"deps", deps}});
    }
    return {{"tasks", tasks}};
}

inline AppDag dag_from_json(const Json& j, const std::string& where = "dag") {
    detail::only_keys(j, {"tasks"}, where);
    if (!j.contains("tasks") || !j["tasks"].is_array()) throw InvalidInput(where + ": 'tasks' must be an array");
    std::vector<TaskSpec> specs;
    std::size_t i = 0;
    for (const Json& t : j["tasks"]) {
        const std::string w = where + ".tasks[" + std::to_string(i++) + "]";
        detail::only_keys(t, {"id", "instructions", "data_size", "deps"}, w);
        TaskSpec s{TaskId{detail::req<std::uint32_t>(t, "id", w)}, detail::req<double>(t, "instructions", w),
                   detail::req<double>(t, "data_size", w), {}};
        std::vector<std::uint32_t> deps;
        detail::opt(t, "deps", deps, w);
        for (std::uint32_t d : deps) s.deps.emplace_back(d);
        specs.push_back(std::move(s));
    }
    return validate_dag(std::move(specs));
}

// ---- devices ----

inline Json device_to_json(const DeviceSpec& d) {
    return {{"id", d.id.value},
            {"cpu_speed", d.cpu_speed},
            {"cpu_utilization", d.cpu_utilization},
            {"battery", d.battery},
            {"has_wifi", d.has_wifi},
            {"has_ether", d.has_ether},
            {"bandwidth_wifi", d.bandwidth_wifi},
            {"bandwidth_ether", d.bandwidth_ether},
            {"latency", d.latency},
            {"avail_time", d.avail_time},
            {"mtbf", d.mtbf},
            {"per_conn_rate", d.per_conn_rate},
            {"conn_count", d.conn_count},
            {"tasks_failed", d.tasks_failed},
            {"tasks_total", d.tasks_total},
            {"peers_connected", d.peers_connected},
            {"failure", {{"shape", d.failure.shape}, {"scale", d.failure.scale}}}};
}

inline DeviceSpec device_from_json(const Json& j, const std::string& where, bool need_id = true) {
    detail::only_keys(j,
                      {"id", "cpu_speed", "cpu_utilization", "battery", "has_wifi", "has_ether", "bandwidth_wifi",
                       "bandwidth_ether", "latency", "avail_time", "mtbf", "per_conn_rate", "conn_count",
                       "tasks_failed", "tasks_total", "peers_connected", "failure"},
                      where);
    DeviceSpec d;
    if (need_id) d.id = DeviceId{detail::req<std::uint32_t>(j, "id", where)};
    detail::opt(j, "cpu_speed", d.cpu_speed, where);
    detail::opt(j, "cpu_utilization", d.cpu_utilization, where);
    detail::opt(j, "battery", d.battery, where);
    detail::opt(j, "has_wifi", d.has_wifi, where);
    detail::opt(j, "has_ether", d.has_ether, where);
    detail::opt(j, "bandwidth_wifi", d.bandwidth_wifi, where);
    detail::opt(j, "bandwidth_ether", d.bandwidth_ether, where);
    detail::opt(j, "latency", d.latency, where);
    detail::opt(j, "avail_time", d.avail_time, where);
    detail::opt(j, "mtbf", d.mtbf, where);
    detail::opt(j, "per_conn_rate", d.per_conn_rate, where);
    detail::opt(j, "conn_count", d.conn_count, where);
    detail::opt(j, "tasks_failed", d.tasks_failed, where);
    detail::opt(j, "tasks_total", d.tasks_total, where);
    detail::opt(j, "peers_connected", d.peers_connected, where);
    if (j.contains("failure")) {
        const Json& f = j["failure"];
        detail::only_keys(f, {"shape", "scale"}, where + ".failure");
        detail::opt(f, "shape", d.failure.shape, where + ".failure");
        detail::opt(f, "scale", d.failure.scale, where + ".failure");
    }
    return d;
}

inline Json devices_to_json(const DevicePopulation& pop) {
    Json arr = Json::array();
    for (const DeviceSpec& d : pop.all()) arr.push_back(device_to_json(d));
    return {{"devices", arr}};
}

inline DevicePopulation devices_from_json(const Json& j, const std::string& where = "devices") {
    detail::only_keys(j, {"devices"}, where);
    if (!j.contains("devices") || !j["devices"].is_array()) throw InvalidInput(where + ": 'devices' must be an array");
    std::vector<DeviceSpec> out;
    std::size_t i = 0;
    for (const Json& d : j["devices"]) out.push_back(device_from_json(d, where + "[" + std::to_string(i++) + "]"));
    return DevicePopulation(std::move(out));
}

// ---- offloading plan ----

inline Json plan_to_json(const SchedulePlan& p) {
    Json asg = Json::array();
    for (const auto& [t, d] : p.assignments) asg.push_back({{"task", t.value}, {"device", d.value}});
    Json off = Json::array();
    for (TaskId t : p.offload_set) off.push_back(t.value);
    return {{"assignments", asg}, {"offload", off}};
}

inline SchedulePlan plan_from_json(const Json& j, const std::string& where = "plan") {
    detail::only_keys(j, {"assignments", "offload"}, where);
    SchedulePlan p;
    if (!j.contains("assignments") || !j["assignments"].is_array()) {
        throw InvalidInput(where + ": 'assignments' must be an array");
    }
    for (const Json& a : j["assignments"]) {
        detail::only_keys(a, {"task", "device"}, where + ".assignments");
        const TaskId t{detail::req<std::uint32_t>(a, "task", where)};
        if (!p.assignments.emplace(t, DeviceId{detail::req<std::uint32_t>(a, "device", where)}).second) {
            throw InvalidInput(where + ": task " + t.str() + " assigned twice");
        }
    }
    std::vector<std::uint32_t> off;
    detail::opt(j, "offload", off, where);
    for (std::uint32_t t : off) p.offload_set.insert(TaskId{t});
    return p;
}

// ---- scenario ----

inline Json weights_to_json(const WeightsConfig& w) {
    return {{"avail_y", w.avail_y},       {"avail_z", w.avail_z},       {"score_y", w.score_y},
            {"score_z", w.score_z},       {"score_lambda", w.score_lambda}, {"alpha_cpu", w.alpha_cpu},
            {"alpha_batt", w.alpha_batt}, {"alpha_conn", w.alpha_conn}};
}

inline WeightsConfig weights_from_json(const Json& j, const std::string& where) {
    detail::only_keys(j, {"avail_y", "avail_z", "score_y", "score_z", "score_lambda", "alpha_cpu", "alpha_batt", "alpha_conn"},
                      where);
    WeightsConfig w;
    detail::opt(j, "avail_y", w.avail_y, where);
    detail::opt(j, "avail_z", w.avail_z, where);
    detail::opt(j, "score_y", w.score_y, where);
    detail::opt(j, "score_z", w.score_z, where);
    detail::opt(j, "score_lambda", w.score_lambda, where);
    detail::opt(j, "alpha_cpu", w.alpha_cpu, where);
    detail::opt(j, "alpha_batt", w.alpha_batt, where);
    detail::opt(j, "alpha_conn", w.alpha_conn, where);
    return w;
}

inline Json scenario_to_json(const ScenarioConfig& c) {
    using detail::to_json;
    Json strategies = Json::array();
    for (Strategy s : c.strategies) strategies.push_back(std::string(to_string(s)));
    Json source = device_to_json(c.source);
    source.erase("id");
    return {{"app_count", c.app_count},
            {"instructions", to_json(c.instructions)},
            {"data_size", to_json(c.data_size)},
            {"dag", {{"task_count", to_json(c.dag.task_count)}, {"edge_probability", c.dag.edge_probability}}},
            {"device_count", to_json(c.device_count)},
            {"cpu_speed", to_json(c.cpu_speed)},
            {"cpu_utilization", to_json(c.cpu_utilization)},
            {"battery", to_json(c.battery)},
            {"avail_time", to_json(c.avail_time)},
            {"weibull", {{"shape", c.weibull.shape}, {"scale", c.weibull.scale}}},
            {"mtbf", c.mtbf ? to_json(*c.mtbf) : Json(nullptr)},
            {"bandwidth_wifi", to_json(c.bandwidth_wifi)},
            {"ether_probability", c.ether_probability},
            {"bandwidth_ether", to_json(c.bandwidth_ether)},
            {"latency", to_json(c.latency)},
            {"per_conn_rate", c.per_conn_rate},
            {"conn_count", to_json(c.conn_count)},
            {"tasks_total", to_json(c.tasks_total)},
            {"fail_ratio", to_json(c.fail_ratio)},
            {"source", source},
            {"weights", weights_to_json(c.weights)},
            {"repair_delay", c.repair_delay},
            {"snapshot_ratio", c.snapshot_ratio},
            {"checkpoint_cost", c.checkpoint_cost ? Json(*c.checkpoint_cost) : Json(nullptr)},
            {"min_checkpoint_interval", c.min_checkpoint_interval},
            {"instruction_scale", c.instruction_scale},
            {"computation_scale", c.computation_scale},
            {"failures_enabled", c.failures_enabled},
            {"enforce_avail_window", c.enforce_avail_window},
            {"seed", c.seed},
            {"strategies", strategies}};
}

inline std::vector<Strategy> strategies_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw InvalidInput(where + ": expected an array of strategy names");
    std::vector<Strategy> out;
    for (const Json& s : j) {
        if (!s.is_string()) throw InvalidInput(where + ": strategy names must be strings");
        out.push_back(parse_strategy(s.get<std::string>()));
    }
    return out;
}

// Keys left out keep their defaults from `base`.
inline ScenarioConfig scenario_from_json(const Json& j, ScenarioConfig base = {}, const std::string& where = "scenario") {
    detail::only_keys(j,
                      {"app_count", "instructions", "data_size", "dag", "device_count", "cpu_speed", "cpu_utilization",
                       "battery", "avail_time", "weibull", "mtbf", "bandwidth_wifi", "ether_probability",
                       "bandwidth_ether", "latency", "per_conn_rate", "conn_count", "tasks_total", "fail_ratio",
                       "source", "weights", "repair_delay", "snapshot_ratio", "checkpoint_cost",
                       "min_checkpoint_interval", "instruction_scale", "computation_scale", "failures_enabled",
                       "enforce_avail_window", "seed", "strategies"},
                      where);
    ScenarioConfig c = std::move(base);
    detail::opt(j, "app_count", c.app_count, where);
    detail::opt_range(j, "instructions", c.instructions, where);
    detail::opt_range(j, "data_size", c.data_size, where);
    if (j.contains("dag")) {
        const Json& d = j["dag"];
        detail::only_keys(d, {"task_count", "edge_probability"}, where + ".dag");
        detail::opt_int_range(d, "task_count", c.dag.task_count, where + ".dag");
        detail::opt(d, "edge_probability", c.dag.edge_probability, where + ".dag");
    }
    detail::opt_int_range(j, "device_count", c.device_count, where);
    detail::opt_range(j, "cpu_speed", c.cpu_speed, where);
    detail::opt_range(j, "cpu_utilization", c.cpu_utilization, where);
    detail::opt_range(j, "battery", c.battery, where);
    detail::opt_range(j, "avail_time", c.avail_time, where);
    if (j.contains("weibull")) {
        const Json& w = j["weibull"];
        detail::only_keys(w, {"shape", "scale"}, where + ".weibull");
        detail::opt(w, "shape", c.weibull.shape, where + ".weibull");
        detail::opt(w, "scale", c.weibull.scale, where + ".weibull");
    }
    if (j.contains("mtbf")) {
        if (j["mtbf"].is_null()) c.mtbf.reset();
        else c.mtbf = detail::range(j["mtbf"], where + ".mtbf");
    }
    detail::opt_range(j, "bandwidth_wifi", c.bandwidth_wifi, where);
    detail::opt(j, "ether_probability", c.ether_probability, where);
    detail::opt_range(j, "bandwidth_ether", c.bandwidth_ether, where);
    detail::opt_range(j, "latency", c.latency, where);
    detail::opt(j, "per_conn_rate", c.per_conn_rate, where);
    detail::opt_int_range(j, "conn_count", c.conn_count, where);
    detail::opt_int_range(j, "tasks_total", c.tasks_total, where);
    detail::opt_range(j, "fail_ratio", c.fail_ratio, where);
    if (j.contains("source")) {
        c.source = device_from_json(j["source"], where + ".source", false);
        c.source.id = kSourceDevice;
    }
    if (j.contains("weights")) c.weights = weights_from_json(j["weights"], where + ".weights");
    detail::opt(j, "repair_delay", c.repair_delay, where);
    detail::opt(j, "snapshot_ratio", c.snapshot_ratio, where);
    if (j.contains("checkpoint_cost")) {
        if (j["checkpoint_cost"].is_null()) c.checkpoint_cost.reset();
        else c.checkpoint_cost = detail::req<double>(j, "checkpoint_cost", where);
    }
    detail::opt(j, "min_checkpoint_interval", c.min_checkpoint_interval, where);
    detail::opt(j, "instruction_scale", c.instruction_scale, where);
    detail::opt(j, "computation_scale", c.computation_scale, where);
    detail::opt(j, "failures_enabled", c.failures_enabled, where);
    detail::opt(j, "enforce_avail_window", c.enforce_avail_window, where);
    detail::opt(j, "seed", c.seed, where);
    if (j.contains("strategies")) c.strategies = strategies_from_json(j["strategies"], where + ".strategies");
    validate(c);
    return c;
}

// ---- experiment spec ----

inline Json experiment_to_json(const ExperimentSpec& s) {
    Json strategies = Json::array();
    for (Strategy st : s.strategies) strategies.push_back(std::string(to_string(st)));
    return {{"scenario_id", s.scenario_id},
            {"sweep", std::string(to_string(s.variable))},
            {"values", s.values},
            {"seeds", s.seeds},
            {"first_seed", s.first_seed},
            {"strategies", strategies},
            {"scenario", scenario_to_json(s.base)}};
}

// The scenario block is layered over the built-in experiment regime.
inline ExperimentSpec experiment_from_json(const Json& j, const std::string& where = "experiment") {
    detail::only_keys(j, {"scenario_id", "sweep", "values", "seeds", "first_seed", "strategies", "scenario"}, where);
    ExperimentSpec s;
    s.variable = parse_sweep_variable(detail::req<std::string>(j, "sweep", where));
    s.base = experiment_base();
    if (s.variable == SweepVariable::ComputationScale) s.base.mtbf = Range{90, 120};
    if (s.variable == SweepVariable::Mtbf) s.values = experiment1_mtbf_values();
    else s.values = {1, 2, 3, 4};
    detail::opt(j, "scenario_id", s.scenario_id, where);
    detail::opt(j, "values", s.values, where);
    detail::opt(j, "seeds", s.seeds, where);
    detail::opt(j, "first_seed", s.first_seed, where);
    if (j.contains("scenario")) s.base = scenario_from_json(j["scenario"], s.base, where + ".scenario");
    s.strategies = s.base.strategies;
    if (j.contains("strategies")) s.strategies = strategies_from_json(j["strategies"], where + ".strategies");
    validate(s);
    return s;
}

// ---- generated workload ----

inline Json workload_to_json(const Workload& w) {
    Json apps = Json::array();
    for (const AppDag& d : w.apps) apps.push_back(dag_to_json(d));
    return {{"devices", devices_to_json(w.devices)["devices"]}, {"apps", apps}};
}

inline Workload workload_from_json(const Json& j, const std::string& where = "workload") {
    detail::only_keys(j, {"devices", "apps"}, where);
    Workload w;
    w.devices = devices_from_json(Json{{"devices", j.value("devices", Json::array())}}, where + ".devices");
    if (!j.contains("apps") || !j["apps"].is_array()) throw InvalidInput(where + ": 'apps' must be an array");
    std::size_t i = 0;
    for (const Json& a : j["apps"]) w.apps.push_back(dag_from_json(a, where + ".apps[" + std::to_string(i++) + "]"));
    return w;
}

// ---- files ----

inline Json parse(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(origin + ": " + e.what());
    }
}

inline Json load(const std::string& path) { return parse(read_text(path), path); }

inline void save(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

} // namespace ftsim::io

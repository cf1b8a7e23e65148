#pragma once

#include <initializer_list>
#include <vector>

#include <ftsim/dag.hpp>
#include <ftsim/device.hpp>
#include <ftsim/engine.hpp>
#include <ftsim/policy.hpp>

namespace fx {

inline ftsim::DeviceSpec device(std::uint32_t id, double mips = 1000.0, double bw = 1.0) {
    ftsim::DeviceSpec d;
    d.id = ftsim::DeviceId{id};
    d.cpu_speed = mips;
    d.cpu_utilization = 1.0;
    d.battery = 1.0;
    d.bandwidth_wifi = bw;
    d.latency = 0.0;
    d.mtbf = 100.0;
    d.tasks_total = 10;
    d.tasks_failed = 1;
    return d;
}

inline ftsim::CostModel costs(double bw = 1.0) {
    ftsim::CostModel cm;
    cm.source = device(ftsim::kSourceDevice.value, 1000.0, bw);
    return cm;
}

// instructions are given in millions so that exec time on a 1000 MIPS device
// is instructions / 1000 seconds
inline ftsim::TaskSpec task(std::uint32_t id, double minstr, double data, std::initializer_list<std::uint32_t> deps = {}) {
    ftsim::TaskSpec t{ftsim::TaskId{id}, minstr * 1e6, data, {}};
    for (auto d : deps) t.deps.emplace_back(d);
    return t;
}

inline ftsim::SchedulePlan plan(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> a) {
    ftsim::SchedulePlan p;
    for (auto [t, d] : a) {
        p.assignments.emplace(ftsim::TaskId{t}, ftsim::DeviceId{d});
        p.offload_set.insert(ftsim::TaskId{t});
    }
    return p;
}

} // namespace fx

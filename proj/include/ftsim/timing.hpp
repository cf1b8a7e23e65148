#pragma once

#include <algorithm>

#include <ftsim/dag.hpp>
#include <ftsim/device.hpp>
#include <ftsim/error.hpp>

namespace ftsim {

// Seconds to run `instructions` on a device whose MIPS rating is scaled by the
// CPU fraction available to offloaded work.
inline double exec_time(double instructions, const DeviceSpec& dev) {
    return instructions / (computing_capability(dev) * 1e6);
}

inline double exec_time(const TaskSpec& task, const DeviceSpec& dev) {
    return exec_time(task.instructions, dev);
}

// Throughput of the fastest interface both ends have enabled; 0 if none.
inline double link_rate(const DeviceSpec& from, const DeviceSpec& to) {
    double best = 0.0;
    for (Interface i : {Interface::Wifi, Interface::Ether}) {
        best = std::max(best, std::min(effective_link_speed(from, i), effective_link_speed(to, i)));
    }
    return best;
}

inline double transfer_time(double data_size, const DeviceSpec& from, const DeviceSpec& to) {
    const double rate = link_rate(from, to);
    if (!(rate > 0.0)) {
        throw NoRoute("no common enabled interface between device " + from.id.str() +
                      " and device " + to.id.str());
    }
    return data_size / rate + from.latency + to.latency;
}

} // namespace ftsim

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <ftsim/error.hpp>
#include <ftsim/ids.hpp>
#include <ftsim/rng.hpp>

namespace ftsim {

// Two-parameter Weibull law of a device's time between failures.
struct WeibullParams {
    double shape = 1.21;  // dimensionless
    double scale = 94.08; // seconds
};

inline void validate(const WeibullParams& p) {
    if (!(p.shape > 0.0) || !(p.scale > 0.0)) {
        throw InvalidInput("Weibull shape and scale must be > 0");
    }
}

struct DeviceSpec {
    DeviceId id;
    double cpu_speed = 1000.0;     // MIPS
    double cpu_utilization = 1.0;  // fraction of CPU available to offloaded work, (0, 1]
    double battery = 1.0;          // remaining fraction, [0, 1]
    bool has_wifi = true;
    bool has_ether = false;
    double bandwidth_wifi = 1.0;   // MBps
    double bandwidth_ether = 0.0;  // MBps
    double latency = 0.0;          // s, added once per transfer endpoint
    double avail_time = 1e300;     // s, end of the participation window
    double mtbf = 100.0;           // s
    double per_conn_rate = 0.0;    // MBps consumed by each existing connection
    std::uint32_t conn_count = 0;
    std::uint32_t tasks_failed = 0;
    std::uint32_t tasks_total = 0;
    std::uint32_t peers_connected = 0;
    WeibullParams failure;         // law that generates this device's failures
};

inline void validate(const DeviceSpec& d, std::size_t cluster_size) {
    const std::string who = "device " + d.id.str() + ": ";
    if (!(d.cpu_speed > 0.0)) throw InvalidInput(who + "cpu_speed must be > 0");
    if (!(d.cpu_utilization > 0.0 && d.cpu_utilization <= 1.0)) {
        throw InvalidInput(who + "cpu_utilization must lie in (0, 1]");
    }
    if (!(d.battery >= 0.0 && d.battery <= 1.0)) throw InvalidInput(who + "battery must lie in [0, 1]");
    if (!(d.mtbf > 0.0)) throw InvalidInput(who + "mtbf must be > 0");
    if (d.bandwidth_wifi < 0.0 || d.bandwidth_ether < 0.0 || d.latency < 0.0 || d.per_conn_rate < 0.0) {
        throw InvalidInput(who + "bandwidths, latency and per_conn_rate must be >= 0");
    }
    if (d.tasks_failed > d.tasks_total) throw InvalidInput(who + "tasks_failed exceeds tasks_total");
    if (cluster_size > 0 && d.peers_connected > cluster_size - 1) {
        throw InvalidInput(who + "peers_connected exceeds cluster size - 1");
    }
    validate(d.failure);
}

struct WeightsConfig {
    double avail_y = 0.5;
    double avail_z = 0.5;
    double score_y = 0.2;
    double score_z = 0.6;
    double score_lambda = 0.2;
    double alpha_cpu = 1.0 / 3.0;
    double alpha_batt = 1.0 / 3.0;
    double alpha_conn = 1.0 / 3.0;
};

inline void validate(const WeightsConfig& w) {
    constexpr double tol = 1e-9;
    for (double x : {w.avail_y, w.avail_z, w.score_y, w.score_z, w.score_lambda, w.alpha_cpu,
                     w.alpha_batt, w.alpha_conn}) {
        if (x < 0.0) throw InvalidInput("weights must be >= 0");
    }
    if (std::abs(w.avail_y + w.avail_z - 1.0) > tol) throw InvalidInput("avail_y + avail_z must be 1");
    if (std::abs(w.score_y + w.score_z + w.score_lambda - 1.0) > tol) {
        throw InvalidInput("score_y + score_z + score_lambda must be 1");
    }
    if (std::abs(w.alpha_cpu + w.alpha_batt + w.alpha_conn - 1.0) > tol) {
        throw InvalidInput("alpha_cpu + alpha_batt + alpha_conn must be 1");
    }
}

struct ReliabilityScores {
    double capability = 0.0;
    double availability = 0.0;
    double comm_capacity = 0.0;
    double reliability = 0.0;
};

inline double computing_capability(const DeviceSpec& d) { return d.cpu_speed * d.cpu_utilization; }

// Weighted product of uptime and battery.
inline double availability(const DeviceSpec& d, const WeightsConfig& w) {
    return (w.avail_y * d.mtbf) * (w.avail_z * d.battery);
}

enum class Interface { Wifi, Ether };

inline double effective_link_speed(const DeviceSpec& d, Interface i) {
    return i == Interface::Wifi ? (d.has_wifi ? d.bandwidth_wifi : 0.0)
                                : (d.has_ether ? d.bandwidth_ether : 0.0);
}

inline double total_bandwidth(const DeviceSpec& d) {
    return effective_link_speed(d, Interface::Wifi) + effective_link_speed(d, Interface::Ether);
}

// Remaining bandwidth after existing connections; never negative.
inline double communication_capacity(const DeviceSpec& d) {
    return std::max(0.0, total_bandwidth(d) - d.per_conn_rate * static_cast<double>(d.conn_count));
}

inline ReliabilityScores reliability(const DeviceSpec& d, const WeightsConfig& w) {
    ReliabilityScores s;
    s.capability = computing_capability(d);
    s.availability = availability(d, w);
    s.comm_capacity = communication_capacity(d);
    s.reliability = (w.alpha_cpu * s.capability) * (w.alpha_batt * s.availability) *
                    (w.alpha_conn * s.comm_capacity);
    return s;
}

// Inverse CDF; u in (0, 1).
inline double weibull_quantile(const WeibullParams& p, double u) {
    return p.scale * std::pow(-std::log1p(-u), 1.0 / p.shape);
}

inline double weibull_cdf(const WeibullParams& p, double t) {
    if (t <= 0.0) return 0.0;
    return -std::expm1(-std::pow(t / p.scale, p.shape));
}

inline double weibull_pdf(const WeibullParams& p, double t) {
    if (t < 0.0) return 0.0;
    const double z = t / p.scale;
    return p.shape / p.scale * std::pow(z, p.shape - 1.0) * std::exp(-std::pow(z, p.shape));
}

inline double sample_failure_time(const WeibullParams& p, Rng& rng) {
    return weibull_quantile(p, rng.uniform01());
}

inline double weibull_mean(const WeibullParams& p) { return p.scale * std::tgamma(1.0 + 1.0 / p.shape); }

// Scale whose Weibull mean equals `mtbf` at the given shape.
inline double weibull_scale_for_mean(double shape, double mtbf) {
    return mtbf / std::tgamma(1.0 + 1.0 / shape);
}

} // namespace ftsim

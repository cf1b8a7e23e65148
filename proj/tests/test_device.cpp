#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <ftsim/device.hpp>
#include <ftsim/rng.hpp>
#include <ftsim/timing.hpp>

#include "oracles.hpp"

using namespace ftsim;

namespace {

DeviceSpec dev(double cpu, double phi) {
    DeviceSpec d;
    d.id = DeviceId{1};
    d.cpu_speed = cpu;
    d.cpu_utilization = phi;
    return d;
}

// Frozen from the survival-function quadrature and bisection oracles.
constexpr double kTableMean = 88.310118765764;
constexpr double kTableMedian = 69.494126902513;

} // namespace

TEST(Capability, Products) {
    EXPECT_DOUBLE_EQ(computing_capability(dev(1000, 0.5)), 500.0);
    EXPECT_DOUBLE_EQ(computing_capability(dev(1000, 1.0)), 1000.0);
    EXPECT_DOUBLE_EQ(computing_capability(dev(100000, 0.25)), 25000.0);
}

TEST(Availability, LiteralProduct) {
    WeightsConfig w;
    DeviceSpec d = dev(1000, 1);
    d.mtbf = 100;
    d.battery = 0.8;
    EXPECT_DOUBLE_EQ(availability(d, w), 20.0);
    d.battery = 0.0;
    EXPECT_DOUBLE_EQ(availability(d, w), 0.0);
    w.avail_y = 0.2;
    w.avail_z = 0.8;
    d.mtbf = 94.08;
    d.battery = 1.0;
    EXPECT_NEAR(availability(d, w), 15.0528, 1e-12);
}

TEST(CommunicationCapacity, ClampsAndSums) {
    DeviceSpec d = dev(1000, 1);
    d.bandwidth_wifi = 1.2;
    d.per_conn_rate = 0.1;
    d.conn_count = 2;
    EXPECT_NEAR(communication_capacity(d), 1.0, 1e-12);
    d.bandwidth_wifi = 1.0;
    d.per_conn_rate = 0.5;
    d.conn_count = 3;
    EXPECT_DOUBLE_EQ(communication_capacity(d), 0.0);
    d.conn_count = 0;
    EXPECT_DOUBLE_EQ(communication_capacity(d), 1.0);
    d.has_ether = true;
    d.bandwidth_ether = 10.0;
    EXPECT_DOUBLE_EQ(communication_capacity(d), 11.0);
}

TEST(Reliability, ProductOfCriteria) {
    WeightsConfig w;
    DeviceSpec d = dev(500, 1);
    d.mtbf = 100;
    d.battery = 0.8;
    d.bandwidth_wifi = 1.0;
    const ReliabilityScores s = reliability(d, w);
    EXPECT_DOUBLE_EQ(s.capability, 500.0);
    EXPECT_DOUBLE_EQ(s.availability, 20.0);
    EXPECT_DOUBLE_EQ(s.comm_capacity, 1.0);
    EXPECT_NEAR(s.reliability, 10000.0 / 27.0, 1e-9);  // 166.667 * 6.667 * 0.333

    d.battery = 0.0;
    EXPECT_DOUBLE_EQ(reliability(d, w).reliability, 0.0);
}

TEST(Reliability, SymmetricCase) {
    WeightsConfig w;
    DeviceSpec d = dev(3, 1);
    d.mtbf = 12;  // A = (0.5*12)(0.5*1) = 3
    d.battery = 1.0;
    d.bandwidth_wifi = 3;
    EXPECT_NEAR(reliability(d, w).reliability, 1.0, 1e-12);
}

TEST(Reliability, RankingIgnoresWeightTriple) {
    Rng rng(7);
    std::vector<DeviceSpec> ds;
    for (std::uint32_t i = 0; i < 40; ++i) {
        DeviceSpec d = dev(rng.uniform(1000, 100000), rng.uniform(0.2, 1.0));
        d.id = DeviceId{i};
        d.battery = rng.uniform(0.2, 1.0);
        d.mtbf = rng.uniform(10, 120);
        d.bandwidth_wifi = rng.uniform(0.9, 1.2);
        d.per_conn_rate = 0.05;
        d.conn_count = static_cast<std::uint32_t>(rng.uniform_int(0, 4));
        ds.push_back(d);
    }
    WeightsConfig a, b;
    b.alpha_cpu = 0.6;
    b.alpha_batt = 0.3;
    b.alpha_conn = 0.1;
    b.avail_y = 0.9;
    b.avail_z = 0.1;
    auto rank = [&](const WeightsConfig& w) {
        std::vector<std::size_t> idx(ds.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
            return reliability(ds[x], w).reliability < reliability(ds[y], w).reliability;
        });
        return idx;
    };
    EXPECT_EQ(rank(a), rank(b));
    for (const DeviceSpec& d : ds) {
        EXPECT_GE(reliability(d, a).reliability, 0.0);
        EXPECT_GE(communication_capacity(d), 0.0);
    }
}

TEST(LinkSpeed, Indicators) {
    DeviceSpec d = dev(1000, 1);
    d.bandwidth_wifi = 1.2;
    EXPECT_DOUBLE_EQ(effective_link_speed(d, Interface::Wifi), 1.2);
    d.bandwidth_ether = 12.0;
    EXPECT_DOUBLE_EQ(effective_link_speed(d, Interface::Ether), 0.0);
    d.bandwidth_wifi = 0.9;
    EXPECT_DOUBLE_EQ(effective_link_speed(d, Interface::Wifi), 0.9);
    d.has_wifi = false;
    EXPECT_DOUBLE_EQ(effective_link_speed(d, Interface::Wifi), 0.0);
}

TEST(Weibull, QuantileExamples) {
    const WeibullParams p{1.21, 94.08};
    EXPECT_NEAR(weibull_quantile(p, 1.0 - std::exp(-1.0)), 94.08, 1e-9);
    EXPECT_NEAR(weibull_quantile(p, 0.5), kTableMedian, 1e-9);
    EXPECT_NEAR(weibull_quantile(p, 0.5), 69.5, 0.05);
    EXPECT_NEAR(weibull_quantile({1.0, 100.0}, 0.5), 100.0 * std::log(2.0), 1e-9);
}

TEST(Weibull, MeanExamples) {
    EXPECT_NEAR(weibull_mean({1.0, 100.0}), 100.0, 1e-9);
    EXPECT_NEAR(weibull_mean({1.21, 94.08}), kTableMean, 1e-9);
    EXPECT_NEAR(weibull_mean({2.0, 1.0}), std::sqrt(std::acos(-1.0)) / 2.0, 1e-12);
}

TEST(Weibull, OraclesAgreeWithFrozenValues) {
    EXPECT_NEAR(oracle::weibull_mean_by_integration(1.21, 94.08), kTableMean, 1e-6);
    EXPECT_NEAR(oracle::weibull_median_by_bisection(1.21, 94.08), kTableMedian, 1e-9);
}

TEST(Weibull, EmpiricalMeanWithinTwoPercent) {
    const WeibullParams p{1.21, 94.08};
    Rng rng(12345);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += sample_failure_time(p, rng);
    EXPECT_NEAR(sum / n / weibull_mean(p), 1.0, 0.02);
}

TEST(Weibull, QuantileStrictlyIncreasing) {
    const WeibullParams p{1.21, 94.08};
    double prev = 0.0;
    for (int i = 1; i < 1000; ++i) {
        const double t = weibull_quantile(p, i / 1000.0);
        ASSERT_GT(t, prev);
        prev = t;
    }
}

TEST(Weibull, CdfInvertsQuantile) {
    const WeibullParams p{1.21, 94.08};
    for (double u : {0.01, 0.2, 0.5, 0.9, 0.999}) EXPECT_NEAR(weibull_cdf(p, weibull_quantile(p, u)), u, 1e-12);
    EXPECT_DOUBLE_EQ(weibull_cdf(p, -1.0), 0.0);
}

TEST(Weibull, ScaleForMeanRoundTrips) {
    for (double m : {10.0, 60.0, 120.0}) {
        EXPECT_NEAR(weibull_mean({1.21, weibull_scale_for_mean(1.21, m)}), m, 1e-9);
    }
}

TEST(Validation, DeviceInvariants) {
    DeviceSpec d = dev(1000, 1);
    EXPECT_NO_THROW(validate(d, 1));
    DeviceSpec bad = d;
    bad.cpu_utilization = 0.0;
    EXPECT_THROW(validate(bad, 1), InvalidInput);
    bad = d;
    bad.battery = 1.5;
    EXPECT_THROW(validate(bad, 1), InvalidInput);
    bad = d;
    bad.tasks_total = 3;
    bad.tasks_failed = 4;
    EXPECT_THROW(validate(bad, 1), InvalidInput);
    bad = d;
    bad.peers_connected = 5;
    EXPECT_THROW(validate(bad, 5), InvalidInput);
    EXPECT_NO_THROW(validate(bad, 6));
    bad = d;
    bad.failure.shape = 0.0;
    EXPECT_THROW(validate(bad, 1), InvalidInput);
}

TEST(Validation, WeightSums) {
    WeightsConfig w;
    EXPECT_NO_THROW(validate(w));
    w.score_y = 0.3;
    EXPECT_THROW(validate(w), InvalidInput);
    w = {};
    w.alpha_cpu = -0.1;
    w.alpha_batt = 0.7;
    EXPECT_THROW(validate(w), InvalidInput);
}

TEST(Timing, ExecAndTransfer) {
    EXPECT_DOUBLE_EQ(exec_time(100000, dev(1000, 1)), 1e-4);
    EXPECT_DOUBLE_EQ(exec_time(100000, dev(1000, 0.5)), 2e-4);
    DeviceSpec a = dev(1000, 1), b = dev(1000, 1);
    a.bandwidth_wifi = 1.0;
    b.bandwidth_wifi = 1.0;
    EXPECT_DOUBLE_EQ(transfer_time(1.0, a, b), 1.0);
    a.latency = b.latency = 0.05;
    EXPECT_DOUBLE_EQ(transfer_time(0.0, a, b), 0.1);
    a.bandwidth_wifi = 0.9;
    b.bandwidth_wifi = 1.2;
    EXPECT_NEAR(transfer_time(10.0, a, b), 10.0 / 0.9 + 0.1, 1e-12);
    EXPECT_NEAR(transfer_time(10.0, a, b), 11.211, 5e-4);
    b.has_wifi = false;
    EXPECT_THROW(transfer_time(1.0, a, b), NoRoute);
}

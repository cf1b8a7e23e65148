#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include <ftsim/clustering.hpp>
#include <ftsim/rng.hpp>

#include "oracles.hpp"

using namespace ftsim;

namespace {

std::vector<DeviceId> make_ids(std::size_t n) {
    std::vector<DeviceId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.emplace_back(static_cast<std::uint32_t>(i));
    return ids;
}

std::vector<double> well_separated(Rng& rng, std::size_t n) {
    const std::size_t n_low = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n) - 1));
    const double spread = rng.uniform(0.01, 1.0);
    const double gap = spread * rng.uniform(11.0, 100.0);
    const double base = rng.uniform(0.0, 100.0);
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i) {
        const double off = rng.uniform(0.0, spread);
        v.push_back(i < n_low ? base + off : base + spread + gap + off);
    }
    for (std::size_t i = n; i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    return v;
}

} // namespace

TEST(KMeans, FourValues) {
    const KMeansResult r = kmeans_1d({0.1, 0.2, 0.8, 0.9}, 2);
    ASSERT_EQ(r.centroids.size(), 2u);
    EXPECT_NEAR(r.centroids[0], 0.15, 1e-12);
    EXPECT_NEAR(r.centroids[1], 0.85, 1e-12);
    EXPECT_EQ(r.assignment, (std::vector<std::size_t>{0, 0, 1, 1}));
    const auto best = oracle::best_two_partition({0.1, 0.2, 0.8, 0.9});
    EXPECT_EQ(best.side, (std::vector<int>{0, 0, 1, 1}));
}

TEST(KMeans, SingleValueSingleCluster) {
    const KMeansResult r = kmeans_1d({5.0}, 1);
    ASSERT_EQ(r.centroids.size(), 1u);
    EXPECT_DOUBLE_EQ(r.centroids[0], 5.0);
    EXPECT_FALSE(r.degenerate);
}

TEST(KMeans, ZeroSpreadIsDegenerate) {
    const KMeansResult r = kmeans_1d({1, 1, 1, 1}, 2);
    EXPECT_TRUE(r.degenerate);
    ASSERT_EQ(r.centroids.size(), 1u);
    EXPECT_DOUBLE_EQ(r.centroids[0], 1.0);
}

TEST(KMeans, Errors) {
    EXPECT_THROW(kmeans_1d({}, 2), EmptyInput);
    EXPECT_THROW(kmeans_1d({1.0}, 0), InvalidInput);
}

TEST(KMeans, TieGoesToLowCluster) {
    // centroids start at 0 and 2; the midpoint 1 joins the low side, giving
    // {0, 1} / {2} with centroids 0.5 and 2, where 1 is no longer a tie.
    const KMeansResult r = kmeans_1d({0.0, 1.0, 2.0}, 2);
    EXPECT_EQ(r.assignment, (std::vector<std::size_t>{0, 0, 1}));
}

TEST(KMeans, ObjectiveNeverIncreases) {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v;
        const auto n = rng.uniform_int(2, 40);
        for (int i = 0; i < n; ++i) v.push_back(rng.uniform(0.0, 1.0) * rng.uniform(0.0, 1.0));
        const KMeansResult r = kmeans_1d(v, 2);
        for (std::size_t i = 1; i < r.objective.size(); ++i) ASSERT_LE(r.objective[i], r.objective[i - 1] + 1e-12);
        ASSERT_LE(r.iterations, kKMeansMaxIterations);
    }
}

TEST(KMeans, EveryValueSitsWithItsNearestCentroid) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v;
        const auto n = rng.uniform_int(2, 30);
        for (int i = 0; i < n; ++i) v.push_back(rng.uniform(0.0, 10.0));
        const KMeansResult r = kmeans_1d(v, 2);
        if (r.degenerate) continue;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double d0 = std::abs(v[i] - r.centroids[0]), d1 = std::abs(v[i] - r.centroids[1]);
            ASSERT_EQ(r.assignment[i], d1 < d0 ? 1u : 0u);
        }
    }
}

TEST(Split, FourDevices) {
    const ClusterSplit s = split_by_reliability(make_ids(4), {0.1, 0.12, 0.9, 0.95});
    EXPECT_EQ(s.low, (std::vector<DeviceId>{DeviceId{0}, DeviceId{1}}));
    EXPECT_EQ(s.high, (std::vector<DeviceId>{DeviceId{2}, DeviceId{3}}));
    EXPECT_GE(s.centroid_high, s.centroid_low);
}

TEST(Split, OneDeviceIsHigh) {
    const ClusterSplit s = split_by_reliability(make_ids(1), {3.0});
    EXPECT_EQ(s.high.size(), 1u);
    EXPECT_TRUE(s.low.empty());
}

TEST(Split, EqualScoresAllHigh) {
    const ClusterSplit s = split_by_reliability(make_ids(5), std::vector<double>(5, 0.4));
    EXPECT_EQ(s.high.size(), 5u);
    EXPECT_TRUE(s.low.empty());
}

TEST(Split, Errors) {
    EXPECT_THROW(split_by_reliability({}, {}), EmptyInput);
    EXPECT_THROW(split_by_reliability(make_ids(2), {1.0}), InvalidInput);
}

TEST(Split, WellSeparatedMatchesBruteForceForEverySeed) {
    Rng rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 12));
        const std::vector<double> v = well_separated(rng, n);
        const auto best = oracle::best_two_partition(v);
        for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
            const ClusterSplit s = split_by_reliability(make_ids(n), v, seed);
            for (std::size_t i = 0; i < n; ++i) {
                ASSERT_EQ(s.in_high(DeviceId{static_cast<std::uint32_t>(i)}), best.side[i] == 1) << "trial " << trial;
            }
        }
    }
}

TEST(Split, PermutationInvariant) {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 25));
        std::vector<double> v;
        for (std::size_t i = 0; i < n; ++i) v.push_back(std::floor(rng.uniform(0.0, 8.0)) * 0.125);
        const std::vector<DeviceId> ids = make_ids(n);
        const ClusterSplit a = split_by_reliability(ids, v);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::reverse(perm.begin(), perm.end());
        std::rotate(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(trial % n), perm.end());
        std::vector<DeviceId> pid;
        std::vector<double> pv;
        for (std::size_t i : perm) {
            pid.push_back(ids[i]);
            pv.push_back(v[i]);
        }
        const ClusterSplit b = split_by_reliability(pid, pv);
        ASSERT_EQ(a.high, b.high);
        ASSERT_EQ(a.low, b.low);
    }
}

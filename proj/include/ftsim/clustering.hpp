#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include <ftsim/error.hpp>
#include <ftsim/ids.hpp>

namespace ftsim {

struct KMeansResult {
    std::vector<std::size_t> assignment;  // cluster index per input value
    std::vector<double> centroids;        // ascending
    std::size_t iterations = 0;
    std::vector<double> objective;        // within-cluster SSE after each assignment step
    bool degenerate = false;              // zero spread: a single effective cluster
};

inline constexpr std::size_t kKMeansMaxIterations = 100;
inline constexpr double kDegenerateSpread = 1e-12;

// Lloyd's algorithm on scalars. Centroids start evenly spaced from min to max
// (for k = 2: exactly min and max), so `seed` does not influence the result.
// A value equidistant from two centroids joins the lower one.
inline KMeansResult kmeans_1d(const std::vector<double>& values, std::size_t k,
                              std::uint64_t /*seed*/ = 0) {
    if (values.empty()) throw EmptyInput("kmeans_1d: no values");
    if (k == 0) throw InvalidInput("kmeans_1d: k must be >= 1");

    const std::size_t n = values.size();
    // Work in sorted order so sums, and therefore the partition, do not
    // depend on the input permutation.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const double lo = values[order.front()];
    const double hi = values[order.back()];

    KMeansResult res;
    res.assignment.assign(n, 0);

    auto sse = [&](const std::vector<std::size_t>& asg, const std::vector<double>& c) {
        double s = 0.0;
        for (std::size_t i : order) {
            const double d = values[i] - c[asg[i]];
            s += d * d;
        }
        return s;
    };

    if (hi - lo < kDegenerateSpread || k == 1) {
        double sum = 0.0;
        for (std::size_t i : order) sum += values[i];
        res.centroids = {sum / static_cast<double>(n)};
        res.degenerate = k > 1;
        res.iterations = 1;
        res.objective.push_back(sse(res.assignment, res.centroids));
        return res;
    }

    res.centroids.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        res.centroids[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(k - 1);
    }

    std::vector<std::size_t> prev;
    for (std::size_t it = 0; it < kKMeansMaxIterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = std::abs(values[i] - res.centroids[0]);
            for (std::size_t j = 1; j < k; ++j) {
                const double d = std::abs(values[i] - res.centroids[j]);
                if (d < best_d) {
                    best = j;
                    best_d = d;
                }
            }
            res.assignment[i] = best;
        }
        res.iterations = it + 1;
        res.objective.push_back(sse(res.assignment, res.centroids));
        if (res.assignment == prev) break;
        prev = res.assignment;

        std::vector<double> sum(k, 0.0);
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i : order) {
            sum[res.assignment[i]] += values[i];
            ++count[res.assignment[i]];
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (count[j] > 0) res.centroids[j] = sum[j] / static_cast<double>(count[j]);
        }
    }
    return res;
}

struct ClusterSplit {
    std::vector<DeviceId> high;  // ascending ids
    std::vector<DeviceId> low;   // ascending ids
    double centroid_high = 0.0;
    double centroid_low = 0.0;

    bool in_high(DeviceId id) const { return std::binary_search(high.begin(), high.end(), id); }
    bool in_low(DeviceId id) const { return std::binary_search(low.begin(), low.end(), id); }
};

// Two-means split of devices by their combined reliability score. Zero spread
// puts every device in the high cluster.
inline ClusterSplit split_by_reliability(const std::vector<DeviceId>& ids,
                                         const std::vector<double>& reliability,
                                         std::uint64_t seed = 0) {
    if (ids.size() != reliability.size()) {
        throw InvalidInput("split_by_reliability: ids and scores differ in length");
    }
    if (ids.empty()) throw EmptyInput("split_by_reliability: no devices");

    const KMeansResult km = kmeans_1d(reliability, 2, seed);
    ClusterSplit split;
    if (km.degenerate) {
        split.high = ids;
        split.centroid_high = split.centroid_low = km.centroids[0];
    } else {
        split.centroid_low = km.centroids[0];
        split.centroid_high = km.centroids[1];
        for (std::size_t i = 0; i < ids.size(); ++i) {
            (km.assignment[i] == 1 ? split.high : split.low).push_back(ids[i]);
        }
    }
    std::sort(split.high.begin(), split.high.end());
    std::sort(split.low.begin(), split.low.end());
    return split;
}

} // namespace ftsim

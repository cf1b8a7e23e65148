#include <gtest/gtest.h>

#include <cmath>

#include <ftsim/policy.hpp>
#include <ftsim/workload.hpp>

#include "fixtures.hpp"

using namespace ftsim;

namespace {

// Device 1 is fast and well-resourced; 2 and 3 are weak.
DevicePopulation mixed_population() {
    DeviceSpec hr = fx::device(1, 90000);
    DeviceSpec lr1 = fx::device(2, 1000);
    DeviceSpec lr2 = fx::device(3, 1200);
    lr1.battery = 0.3;
    lr2.battery = 0.3;
    lr2.tasks_failed = 5;
    return DevicePopulation({hr, lr1, lr2});
}

} // namespace

TEST(ReplicationScore, Example) {
    DeviceSpec d = fx::device(1);
    d.tasks_total = 10;
    d.tasks_failed = 5;
    d.peers_connected = 4;
    WeightsConfig w;
    EXPECT_NEAR(replication_score(d, 10.0, 4, w), 0.12, 1e-12);
}

TEST(ReplicationScore, ZeroHistoryOrZeroFailuresScoreZero) {
    DeviceSpec d = fx::device(1);
    d.peers_connected = 2;
    d.tasks_total = 0;
    d.tasks_failed = 0;
    EXPECT_DOUBLE_EQ(replication_score(d, 10.0, 3, {}), 0.0);
    d.tasks_total = 8;
    EXPECT_DOUBLE_EQ(replication_score(d, 10.0, 3, {}), 0.0);
    EXPECT_THROW(replication_score(d, 10.0, 0, {}), InvalidInput);
}

TEST(SelectReplica, ArgminAndTies) {
    const CostModel cm = fx::costs();
    const TaskSpec t = fx::task(1, 10, 1);
    DeviceSpec a = fx::device(1), b = fx::device(2), c = fx::device(3);
    for (DeviceSpec* d : {&a, &b, &c}) d->peers_connected = 1;
    b.tasks_failed = 5;  // higher score
    std::vector<const DeviceSpec*> cl{&a, &b, &c};
    // a and c tie; the lower id wins, and the primary is never picked
    EXPECT_EQ(select_replica_device(cl, t, DeviceId{2}, {}, cm), DeviceId{1});
    EXPECT_EQ(select_replica_device(cl, t, DeviceId{1}, {}, cm), DeviceId{3});
    a.tasks_failed = 9;
    EXPECT_EQ(select_replica_device(cl, t, DeviceId{2}, {}, cm), DeviceId{3});
}

TEST(SelectReplica, OnlyPrimaryThrows) {
    const CostModel cm = fx::costs();
    DeviceSpec a = fx::device(1);
    EXPECT_THROW(select_replica_device({&a}, fx::task(1, 1, 1), DeviceId{1}, {}, cm), NoCandidate);
    EXPECT_THROW(select_replica_device({}, fx::task(1, 1, 1), DeviceId{1}, {}, cm), NoCandidate);
}

TEST(SelectReplica, UniformWeightScalingKeepsChoice) {
    Rng rng(3);
    const CostModel cm = fx::costs();
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<DeviceSpec> ds;
        for (std::uint32_t i = 0; i < 8; ++i) {
            DeviceSpec d = fx::device(i, rng.uniform(1000, 100000), rng.uniform(0.9, 1.2));
            d.tasks_total = static_cast<std::uint32_t>(rng.uniform_int(10, 100));
            d.tasks_failed = static_cast<std::uint32_t>(rng.uniform_int(1, d.tasks_total));
            d.peers_connected = static_cast<std::uint32_t>(rng.uniform_int(1, 7));
            ds.push_back(d);
        }
        std::vector<const DeviceSpec*> cl;
        for (const DeviceSpec& d : ds) cl.push_back(&d);
        const TaskSpec t = fx::task(1, rng.uniform(1, 100), rng.uniform(0.5, 10));
        WeightsConfig w;
        WeightsConfig scaled = w;
        const double k = rng.uniform(0.1, 10.0);
        scaled.score_y *= k;
        scaled.score_z *= k;
        scaled.score_lambda *= k;
        ASSERT_EQ(select_replica_device(cl, t, DeviceId{0}, w, cm),
                  select_replica_device(cl, t, DeviceId{0}, scaled, cm));
    }
}

TEST(CheckpointInterval, Examples) {
    EXPECT_EQ(checkpoint_interval(2.0, 100.0), 20.0);
    EXPECT_NEAR(checkpoint_interval(4.5, 94.08), std::sqrt(846.72), 1e-9 * std::sqrt(846.72));
    EXPECT_NEAR(checkpoint_interval(4.5, 94.08), 29.098, 5e-4);
    EXPECT_EQ(checkpoint_interval(0.0, 50.0), 0.0);
    EXPECT_THROW(checkpoint_interval(-1.0, 50.0), InvalidInput);
    EXPECT_THROW(checkpoint_interval(1.0, 0.0), InvalidInput);
}

TEST(CheckpointPolicy, UsesDeviceMeanAndClamps) {
    CostModel cm = fx::costs();
    DeviceSpec d = fx::device(1);
    d.failure = {1.0, 50.0};
    const TaskSpec t = fx::task(1, 100, 2.0);
    const Checkpoint c = checkpoint_policy(t, d, cm);
    EXPECT_DOUBLE_EQ(c.cost, 2.0);  // 2 MB at 1 MBps, snapshot ratio 1
    EXPECT_NEAR(c.interval, std::sqrt(2.0 * 2.0 * 50.0), 1e-12);
    cm.checkpoint_cost = 0.0;
    EXPECT_DOUBLE_EQ(checkpoint_policy(t, d, cm).interval, cm.min_checkpoint_interval);
    cm.checkpoint_cost = 4.5;
    d.failure = {1.21, 94.08};
    EXPECT_NEAR(checkpoint_policy(t, d, cm).interval, std::sqrt(2.0 * 4.5 * weibull_mean(d.failure)), 1e-12);
}

TEST(AssignPolicies, LowHostReplicatesInsideItsClusterHighHostCheckpoints) {
    const DevicePopulation pop = mixed_population();
    const AppDag dag = validate_dag({fx::task(1, 100, 1), fx::task(2, 100, 1, {1})});
    const SchedulePlan plan = fx::plan({{1, 1}, {2, 2}});
    const CostModel cm = fx::costs();
    PolicyDiagnostics diag;
    const PolicyAssignment pa = assign_policies(pop, dag, plan, {}, cm, 0, nullptr, &diag);
    EXPECT_EQ(diag.clusters.high, (std::vector<DeviceId>{DeviceId{1}}));
    ASSERT_TRUE(std::holds_alternative<Checkpoint>(pa.of(TaskId{1})));
    ASSERT_TRUE(std::holds_alternative<Replicate>(pa.of(TaskId{2})));
    EXPECT_EQ(std::get<Replicate>(pa.of(TaskId{2})).replica_device, DeviceId{3});
    const Checkpoint c = std::get<Checkpoint>(pa.of(TaskId{1}));
    EXPECT_NEAR(c.interval, checkpoint_interval(c.cost, weibull_mean(pop.get(DeviceId{1}).failure)), 1e-12);
}

TEST(AssignPolicies, LoneLowDeviceFallsBackToCheckpoint) {
    DeviceSpec hr = fx::device(1, 90000), lr = fx::device(2, 1000);
    lr.battery = 0.3;
    const DevicePopulation pop({hr, lr});
    const AppDag dag = validate_dag({fx::task(1, 100, 1), fx::task(2, 100, 1, {1})});
    const PolicyAssignment pa = assign_policies(pop, dag, fx::plan({{1, 1}, {2, 2}}), {}, fx::costs());
    EXPECT_TRUE(std::holds_alternative<Checkpoint>(pa.of(TaskId{1})));
    EXPECT_TRUE(std::holds_alternative<Checkpoint>(pa.of(TaskId{2})));
}

TEST(AssignPolicies, NonCriticalGetsNothingAndEmptyPlanIsEmpty) {
    const DevicePopulation pop = mixed_population();
    // 1 -> 3 is long, 2 -> 3 is short: task 2 has float
    const AppDag dag = validate_dag({fx::task(1, 1000, 1), fx::task(2, 1, 1), fx::task(3, 100, 1, {1, 2})});
    const PolicyAssignment pa = assign_policies(pop, dag, fx::plan({{1, 1}, {2, 2}, {3, 1}}), {}, fx::costs());
    EXPECT_TRUE(std::holds_alternative<NoPolicy>(pa.of(TaskId{2})));
    EXPECT_FALSE(std::holds_alternative<NoPolicy>(pa.of(TaskId{1})));

    const PolicyAssignment none = assign_policies(pop, dag, SchedulePlan{}, {}, fx::costs());
    EXPECT_TRUE(none.per_task.empty());
}

TEST(AssignPolicies, RejectsInvalidPlan) {
    const DevicePopulation pop = mixed_population();
    const AppDag dag = validate_dag({fx::task(1, 1, 1)});
    EXPECT_THROW(assign_policies(pop, dag, fx::plan({{1, 77}}), {}, fx::costs()), InvalidInput);
    SchedulePlan p;
    p.offload_set.insert(TaskId{1});
    EXPECT_THROW(assign_policies(pop, dag, p, {}, fx::costs()), InvalidInput);
}

TEST(AssignPolicies, RoutingTotalityAndLocalityOnGeneratedScenarios) {
    ScenarioConfig cfg;
    cfg.app_count = 10;
    cfg.instruction_scale = 1e6;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Workload w = generate_workload(cfg, seed);
        const CostModel cm = cfg.cost_model();
        for (const AppDag& dag : w.apps) {
            const SchedulePlan plan = baseline_schedule(dag, w.devices, cfg.source);
            PolicyDiagnostics diag;
            const PolicyAssignment pa = assign_policies(w.devices, dag, plan, cfg.weights, cm, seed, nullptr, &diag);
            const std::set<TaskId> crit(diag.critical.begin(), diag.critical.end());
            for (TaskId t : plan.offload_set) {
                ASSERT_EQ(pa.per_task.count(t), 1u);
                const Policy& p = pa.of(t);
                const DeviceId host = plan.device_of(t);
                if (!crit.count(t)) {
                    ASSERT_TRUE(std::holds_alternative<NoPolicy>(p));
                } else if (const auto* r = std::get_if<Replicate>(&p)) {
                    ASSERT_TRUE(diag.clusters.in_low(host));
                    ASSERT_TRUE(diag.clusters.in_low(r->replica_device));
                    ASSERT_NE(r->replica_device, host);
                } else {
                    const auto* c = std::get_if<Checkpoint>(&p);
                    ASSERT_NE(c, nullptr);
                    ASSERT_GT(c->interval, 0.0);
                    if (diag.clusters.in_low(host)) {
                        ASSERT_EQ(diag.clusters.low.size(), 1u);
                    }
                }
            }
        }
    }
}

TEST(AssignPolicies, OperationCountsStayLinear) {
    for (std::int64_t m : {20, 50}) {
        for (std::int64_t n : {10, 100}) {
            ScenarioConfig cfg;
            cfg.device_count = {m, m};
            cfg.dag.task_count = {n, n};
            cfg.dag.edge_probability = 0.9;  // long chains put many tasks on the critical path
            cfg.app_count = 1;
            const Workload w = generate_workload(cfg, 11);
            const AppDag& dag = w.apps[0];
            const SchedulePlan plan = baseline_schedule(dag, w.devices, cfg.source);
            PolicyCounters k;
            assign_policies(w.devices, dag, plan, cfg.weights, cfg.cost_model(), 0, &k);
            EXPECT_EQ(k.reliability_evals, static_cast<std::uint64_t>(m));
            EXPECT_LE(k.max_score_evals_per_task, static_cast<std::uint64_t>(m));
            EXPECT_LE(k.score_evals, static_cast<std::uint64_t>(m * n));
            EXPECT_GE(k.critical_tasks, 1u);
        }
    }
}

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "flowbb/runtime.hpp"
#include "flowbb/solver.hpp"
#include "flowbb/tree.hpp"
#include "support.hpp"

using namespace flowbb;

namespace {

RunConfig small_config(Strategy strategy, Transfer transfer) {
    RunConfig cfg;
    cfg.strategy = strategy;
    cfg.transfer = transfer;
    cfg.k_split = 1;
    cfg.topology.workers_per_master = {2, 2};
    cfg.topology.sync_interval = 25;
    cfg.link_latency = 1;
    cfg.seed = 7;
    return cfg;
}

}  // namespace

TEST_CASE("topology strings expand with cycling worker counts") {
    Topology t = parse_topology("3:4");
    CHECK(t.workers_per_master == std::vector<std::size_t>{4, 4, 4});
    CHECK(t.n_masters() == 3);
    CHECK(t.n_workers() == 12);

    Topology u = parse_topology("2:1,3");
    CHECK(u.workers_per_master == std::vector<std::size_t>{1, 3});

    Topology v = parse_topology("4:2,5");
    CHECK(v.workers_per_master == std::vector<std::size_t>{2, 5, 2, 5});

    CHECK_THROWS_AS(parse_topology(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_topology("0:2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_topology("2:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_topology("2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_topology("a:b"), std::invalid_argument);
}

TEST_CASE("speed model strings parse and cycle over workers") {
    HeterogeneityModel h = parse_het("homogeneous");
    CHECK(h.factors == std::vector<double>{1.0});
    CHECK(h.factor_for(7) == 1.0);

    HeterogeneityModel m = parse_het("mixed:1,2.5,4");
    CHECK(m.factors == std::vector<double>{1.0, 2.5, 4.0});
    CHECK(m.factor_for(0) == 1.0);
    CHECK(m.factor_for(4) == 2.5);

    CHECK_THROWS_AS(parse_het("mixed:"), std::invalid_argument);
    CHECK_THROWS_AS(parse_het("mixed:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_het("mixed:-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_het("fast"), std::invalid_argument);

    CHECK(parse_mode("sim") == RunMode::Sim);
    CHECK(parse_mode("threads") == RunMode::Threads);
    CHECK_THROWS_AS(parse_mode("simulate"), std::invalid_argument);
}

TEST_CASE("a full simulated run solves the instance to optimality") {
    std::mt19937_64 rng(301);
    for (Strategy s : {Strategy::Sld, Strategy::Rand, Strategy::Acwn, Strategy::Pfs}) {
        for (Transfer t : {Transfer::OneInOne, Transfer::MultiInOne}) {
            Instance inst = testsupport::random_instance(rng, 7, 4);
            Time ref = solve_sequential(inst).value;
            RunMetrics got = run_experiment(inst, small_config(s, t));
            CHECK(got.complete);
            CHECK(got.makespan == ref);
            REQUIRE(is_complete_permutation(inst, got.best));
            CHECK(makespan(inst, got.best) == ref);
            CHECK(got.particles_done == got.particles_total);
            CHECK(got.particles_total == floor_size(7, 1));
            CHECK(got.completion_time > 0);
            CHECK(got.drain_time >= got.completion_time);
            CHECK(got.messages > 0);
            CHECK(got.bytes >= got.messages * kFrameOverhead);
        }
    }
}

TEST_CASE("a single-worker run degrades to the sequential solver") {
    std::mt19937_64 rng(302);
    Instance inst = testsupport::random_instance(rng, 6, 3);
    RunConfig cfg = small_config(Strategy::Sld, Transfer::MultiInOne);
    cfg.topology.workers_per_master = {1};
    cfg.k_split = 0;
    RunMetrics got = run_experiment(inst, cfg);
    CHECK(got.makespan == solve_sequential(inst).value);
    CHECK(got.particles_total == 6);
}

TEST_CASE("identical configs give bit-identical simulated runs") {
    std::mt19937_64 rng(303);
    Instance inst = testsupport::random_instance(rng, 7, 4);
    for (Strategy s : {Strategy::Rand, Strategy::Pfs}) {
        RunConfig cfg = small_config(s, Transfer::MultiInOne);
        cfg.record_trace = true;
        RunMetrics a = run_experiment(inst, cfg);
        RunMetrics b = run_experiment(inst, cfg);
        CHECK(a.completion_time == b.completion_time);
        CHECK(a.drain_time == b.drain_time);
        CHECK(a.makespan == b.makespan);
        CHECK(a.messages == b.messages);
        CHECK(a.bytes == b.bytes);
        CHECK(a.search.nodes_expanded == b.search.nodes_expanded);
        REQUIRE(a.trace.size() == b.trace.size());
        for (std::size_t i = 0; i < a.trace.size(); ++i) {
            CHECK(a.trace[i].time == b.trace[i].time);
            CHECK(a.trace[i].kind == b.trace[i].kind);
            CHECK(a.trace[i].src == b.trace[i].src);
            CHECK(a.trace[i].dst == b.trace[i].dst);
        }
    }
}

TEST_CASE("message accounting ties out with the recorded trace") {
    std::mt19937_64 rng(304);
    Instance inst = testsupport::random_instance(rng, 6, 3);
    RunConfig cfg = small_config(Strategy::Acwn, Transfer::MultiInOne);
    cfg.record_trace = true;
    RunMetrics got = run_experiment(inst, cfg);
    CHECK(got.trace.size() == got.messages);
    std::uint64_t bytes = 0;
    for (const TraceEvent& ev : got.trace) bytes += ev.bytes;
    CHECK(bytes == got.bytes);
    std::uint64_t by_kind_total = std::accumulate(got.messages_by_kind.begin(),
                                                  got.messages_by_kind.end(),
                                                  std::uint64_t{0});
    CHECK(by_kind_total == got.messages);
    // every run begins with the initial distribution and ends in terminates
    CHECK(got.messages_by_kind[static_cast<int>(MsgKind::Terminate)] > 0);
    CHECK(got.messages_by_kind[static_cast<int>(MsgKind::AskForTasks)] > 0);
}

TEST_CASE("single transfers move exactly one id per reallocation frame") {
    std::mt19937_64 rng(305);
    Instance inst = testsupport::random_instance(rng, 7, 3);
    RunConfig cfg = small_config(Strategy::Acwn, Transfer::OneInOne);
    cfg.record_trace = true;
    RunMetrics got = run_experiment(inst, cfg);
    bool saw_single = false;
    for (const TraceEvent& ev : got.trace) {
        if (ev.kind == MsgKind::ReallocateSingle) {
            saw_single = true;
            CHECK(ev.items == 1);
            CHECK(ev.bytes == kFrameOverhead + 8);
        }
        // in this mode a batch frame can only be a decline, which is empty
        if (ev.kind == MsgKind::ReallocateBatch) CHECK(ev.items == 0);
    }
    CHECK(saw_single);
}

TEST_CASE("batched transfers carry their ids in one frame") {
    std::mt19937_64 rng(306);
    Instance inst = testsupport::random_instance(rng, 7, 3);
    RunConfig cfg = small_config(Strategy::Acwn, Transfer::MultiInOne);
    cfg.record_trace = true;
    RunMetrics got = run_experiment(inst, cfg);
    std::uint64_t batched_items = 0;
    for (const TraceEvent& ev : got.trace) {
        CHECK(ev.kind != MsgKind::ReallocateSingle);
        if (ev.kind == MsgKind::ReallocateBatch) {
            batched_items += ev.items;
            CHECK(ev.bytes == kFrameOverhead + 8 * (1 + ev.items));
        }
    }
    CHECK(batched_items >= got.particles_total);  // at least the initial spread
}

TEST_CASE("slower workers stretch the simulated clock") {
    std::mt19937_64 rng(307);
    Instance inst = testsupport::random_instance(rng, 7, 4);
    RunConfig fast = small_config(Strategy::Sld, Transfer::MultiInOne);
    RunConfig slow = fast;
    slow.het = HeterogeneityModel::mixed({0.25});  // everyone at quarter speed
    RunMetrics a = run_experiment(inst, fast);
    RunMetrics b = run_experiment(inst, slow);
    CHECK(b.completion_time > a.completion_time);
    CHECK(a.makespan == b.makespan);  // speed never changes the answer
}

TEST_CASE("a node budget truncates the run but still drains it") {
    std::mt19937_64 rng(308);
    Instance inst = testsupport::random_instance(rng, 9, 4);
    RunConfig cfg = small_config(Strategy::Acwn, Transfer::MultiInOne);
    cfg.node_budget = 50;
    RunMetrics got = run_experiment(inst, cfg);
    CHECK_FALSE(got.complete);
    CHECK(got.particles_done == got.particles_total);  // every id was drained
    CHECK(got.search.nodes_expanded <= 50);            // the cap is global and hard
}

TEST_CASE("a zero-latency network is legal and still terminates") {
    std::mt19937_64 rng(309);
    Instance inst = testsupport::random_instance(rng, 6, 3);
    RunConfig cfg = small_config(Strategy::Rand, Transfer::OneInOne);
    cfg.link_latency = 0;
    RunMetrics got = run_experiment(inst, cfg);
    CHECK(got.complete);
    CHECK(got.makespan == solve_sequential(inst).value);
}

TEST_CASE("an impossible split depth is rejected up front") {
    std::mt19937_64 rng(310);
    Instance inst = testsupport::random_instance(rng, 5, 3);
    RunConfig cfg = small_config(Strategy::Sld, Transfer::MultiInOne);
    cfg.k_split = 5;
    CHECK_THROWS_AS(run_experiment(inst, cfg), std::invalid_argument);
    cfg.k_split = -1;
    CHECK_THROWS_AS(run_experiment(inst, cfg), std::invalid_argument);
    cfg.k_split = 3;
    cfg.max_particles = 10;  // floor 3 fixes four jobs: 5*4*3*2 = 120 ids > 10
    CHECK_THROWS_AS(run_experiment(inst, cfg), CapacityError);
}

TEST_CASE("per-master tallies cover the whole run") {
    std::mt19937_64 rng(311);
    Instance inst = testsupport::random_instance(rng, 7, 3);
    RunMetrics got = run_experiment(inst, small_config(Strategy::Pfs, Transfer::MultiInOne));
    REQUIRE(got.per_master.size() == 2);
    std::uint64_t done = 0;
    for (const MasterStats& s : got.per_master) done += s.completed;
    CHECK(done == got.particles_total);
}

TEST_CASE("a deeper split multiplies the particles and still solves") {
    std::mt19937_64 rng(312);
    Instance inst = testsupport::random_instance(rng, 6, 3);
    RunConfig cfg = small_config(Strategy::Acwn, Transfer::MultiInOne);
    cfg.k_split = 2;
    RunMetrics got = run_experiment(inst, cfg);
    CHECK(got.particles_total == 6 * 5 * 4);
    CHECK(got.makespan == solve_sequential(inst).value);
}

TEST_CASE("the threaded engine reaches the same optimum") {
    std::mt19937_64 rng(313);
    Instance inst = testsupport::random_instance(rng, 7, 4);
    RunConfig cfg = small_config(Strategy::Acwn, Transfer::MultiInOne);
    cfg.mode = RunMode::Threads;
    cfg.topology.sync_interval = 5;  // milliseconds here
    RunMetrics got = run_experiment(inst, cfg);
    CHECK(got.complete);
    CHECK(got.makespan == solve_sequential(inst).value);
    REQUIRE(is_complete_permutation(inst, got.best));
    CHECK(got.particles_done == got.particles_total);
    CHECK(got.messages > 0);
}

TEST_CASE("the threaded engine honours the node budget") {
    std::mt19937_64 rng(314);
    Instance inst = testsupport::random_instance(rng, 9, 4);
    RunConfig cfg = small_config(Strategy::Sld, Transfer::MultiInOne);
    cfg.mode = RunMode::Threads;
    cfg.topology.sync_interval = 5;
    cfg.node_budget = 50;
    RunMetrics got = run_experiment(inst, cfg);
    CHECK_FALSE(got.complete);
    CHECK(got.particles_done == got.particles_total);
}

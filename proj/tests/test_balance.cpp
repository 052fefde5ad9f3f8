#include <doctest.h>

#include <numeric>
#include <random>

#include "flowbb/balance.hpp"
#include "support.hpp"

using namespace flowbb;

namespace {

MasterStats stats_of(int id, int workers, std::uint64_t completed,
                     Time total_exec) {
    MasterStats s;
    s.master_id = id;
    s.n_workers = workers;
    s.completed = completed;
    s.total_exec_time = total_exec;
    return s;
}

}  // namespace

TEST_CASE("token parsing round-trips and rejects junk") {
    CHECK(parse_strategy("sld") == Strategy::Sld);
    CHECK(parse_strategy("rand") == Strategy::Rand);
    CHECK(parse_strategy("acwn") == Strategy::Acwn);
    CHECK(parse_strategy("pfs") == Strategy::Pfs);
    CHECK_THROWS_AS(parse_strategy("magic"), std::invalid_argument);
    for (Strategy s : {Strategy::Sld, Strategy::Rand, Strategy::Acwn, Strategy::Pfs})
        CHECK(parse_strategy(to_string(s)) == s);

    CHECK(parse_transfer("1in1") == Transfer::OneInOne);
    CHECK(parse_transfer("min1") == Transfer::MultiInOne);
    CHECK_THROWS_AS(parse_transfer("2in1"), std::invalid_argument);
    for (Transfer t : {Transfer::OneInOne, Transfer::MultiInOne})
        CHECK(parse_transfer(to_string(t)) == t);

    CHECK(parse_pfs_weight("literal") == PfsWeight::Literal);
    CHECK(parse_pfs_weight("rate") == PfsWeight::Rate);
    CHECK_THROWS_AS(parse_pfs_weight("speed"), std::invalid_argument);
}

TEST_CASE("proportional counts preserve the total exactly") {
    std::mt19937_64 rng(201);
    for (int round = 0; round < 1000; ++round) {
        std::size_t n = 1 + rng() % 6;
        std::vector<double> w(n);
        std::vector<std::uint64_t> wi(n);
        for (std::size_t i = 0; i < n; ++i) {
            wi[i] = rng() % 20;
            w[i] = static_cast<double>(wi[i]);
        }
        std::uint64_t total = rng() % 500;
        auto got = proportional_counts(total, w);
        REQUIRE(got.size() == n);
        std::uint64_t sum = std::accumulate(got.begin(), got.end(),
                                            std::uint64_t{0});
        CHECK(sum == total);
        // integer weights let the exact large-integer oracle apply directly;
        // an all-zero vector falls back to an equal split, so mirror that
        if (std::all_of(wi.begin(), wi.end(), [](std::uint64_t x) { return x == 0; }))
            std::fill(wi.begin(), wi.end(), std::uint64_t{1});
        CHECK(got == testsupport::oracle_apportion(total, wi));
    }
}

TEST_CASE("proportional counts match hand-checked splits") {
    CHECK(proportional_counts(10, {7.0, 3.0}) ==
          std::vector<std::uint64_t>{7, 3});
    CHECK(proportional_counts(10, {1.0, 1.0, 1.0}) ==
          std::vector<std::uint64_t>{4, 3, 3});
    CHECK(proportional_counts(7, {0.0, 1.0}) ==
          std::vector<std::uint64_t>{0, 7});
    CHECK(proportional_counts(5, {2.0, 2.0, 1.0}) ==
          std::vector<std::uint64_t>{2, 2, 1});
}

TEST_CASE("scaling every weight leaves the split unchanged") {
    std::mt19937_64 rng(202);
    for (int round = 0; round < 200; ++round) {
        std::size_t n = 2 + rng() % 4;
        std::vector<double> w(n), w2(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = static_cast<double>(rng() % 50);
            w2[i] = w[i] * 2.0;
        }
        std::uint64_t total = rng() % 300;
        CHECK(proportional_counts(total, w) == proportional_counts(total, w2));
    }
}

TEST_CASE("all-zero weights fall back to an even split") {
    CHECK(proportional_counts(10, {0.0, 0.0, 0.0}) ==
          std::vector<std::uint64_t>{4, 3, 3});
    CHECK(proportional_counts(0, {0.0, 0.0}) ==
          std::vector<std::uint64_t>{0, 0});
}

TEST_CASE("bad weights are rejected") {
    CHECK_THROWS_AS(proportional_counts(5, {}), std::invalid_argument);
    CHECK_THROWS_AS(proportional_counts(5, {1.0, -2.0}), std::invalid_argument);
    CHECK_THROWS_AS(proportional_counts(5, {1.0, std::nan("")}),
                    std::invalid_argument);
}

TEST_CASE("a cold performance plan splits by worker count") {
    std::vector<MasterStats> stats = {
        stats_of(1, 3, 0, 0),
        stats_of(2, 1, 0, 0),
    };
    CHECK(pfs_allocate(8, stats) == std::vector<std::uint64_t>{6, 2});
    // one master warm, one cold: still a cold start overall
    stats[0].completed = 5;
    stats[0].total_exec_time = 50;
    CHECK(pfs_allocate(8, stats) == std::vector<std::uint64_t>{6, 2});
}

TEST_CASE("a warm literal plan favours slow-average masters") {
    // master 1 averages 30 per task, master 2 averages 10; literal weighting
    // treats a higher average as more capacity demand on equal worker counts
    std::vector<MasterStats> stats = {
        stats_of(1, 2, 10, 300),
        stats_of(2, 2, 10, 100),
    };
    auto got = pfs_allocate(8, stats, PfsWeight::Literal);
    CHECK(got == std::vector<std::uint64_t>{6, 2});
}

TEST_CASE("a warm rate plan favours fast-average masters") {
    std::vector<MasterStats> stats = {
        stats_of(1, 2, 10, 300),
        stats_of(2, 2, 10, 100),
    };
    auto got = pfs_allocate(8, stats, PfsWeight::Rate);
    CHECK(got == std::vector<std::uint64_t>{2, 6});
}

TEST_CASE("the least-loaded pick takes the smallest backlog, ties low") {
    std::vector<MasterStats> stats = {
        stats_of(1, 2, 0, 0),
        stats_of(2, 2, 0, 0),
        stats_of(3, 2, 0, 0),
    };
    stats[0].pending = 5;
    stats[1].pending = 2;
    stats[2].pending = 2;
    CHECK(acwn_select(stats) == 2);  // masters 2 and 3 tie; lower id wins
    stats[2].pending = 1;
    CHECK(acwn_select(stats) == 3);
    CHECK_THROWS_AS(acwn_select({}), std::invalid_argument);
}

TEST_CASE("random picks are uniform enough and reproducible") {
    std::mt19937_64 a(7), b(7);
    std::vector<int> counts(4, 0);
    for (int i = 0; i < 40000; ++i) {
        int pick = rand_select(a, 4);
        REQUIRE(pick >= 0);
        REQUIRE(pick < 4);
        CHECK(pick == rand_select(b, 4));
        ++counts[pick];
    }
    for (int c : counts) {
        CHECK(c > 9400);
        CHECK(c < 10600);
    }
    CHECK_THROWS_AS(rand_select(a, 0), std::invalid_argument);
}

TEST_CASE("static partitions are contiguous and worker-proportional") {
    std::vector<u128> ids(10);
    std::iota(ids.begin(), ids.end(), u128{100});
    auto parts = sld_partition(ids, {3, 1});
    REQUIRE(parts.size() == 2);
    // 3:1 worker ratio over 10 ids rounds to 8 and 2 (7.5 rounds up first)
    CHECK(parts[0].size() + parts[1].size() == 10);
    CHECK(parts[0].size() == 8);
    CHECK(parts[0].front() == 100);
    CHECK(parts[1].front() == 108);
    CHECK(parts[1].back() == 109);

    auto even = sld_partition(ids, {1, 1, 1});
    CHECK(even[0].size() == 4);
    CHECK(even[1].size() == 3);
    CHECK(even[2].size() == 3);
}

#include <doctest.h>

#include <sstream>

#include "flowbb/flowshop.hpp"
#include "flowbb/taillard.hpp"

using namespace flowbb;

TEST_CASE("a plain header plus matrix parses into a job-major instance") {
    std::istringstream in(
        "3 2\n"
        "5 1 4\n"   // machine 0 times for jobs 0..2
        "2 6 3\n"); // machine 1
    auto got = parse_taillard(in, "unit");
    REQUIRE(got.size() == 1);
    const Instance& inst = got[0];
    CHECK(inst.jobs == 3);
    CHECK(inst.machines == 2);
    CHECK(inst.p(0, 0) == 5);
    CHECK(inst.p(0, 1) == 2);
    CHECK(inst.p(2, 0) == 4);
    CHECK(inst.p(2, 1) == 3);
    CHECK(inst.name == "unit");
}

TEST_CASE("header rows may carry seed and bound fields") {
    std::istringstream in(
        "2 2 873654221 14 12\n"
        "4 3\n"
        "2 5\n");
    auto got = parse_taillard(in);
    REQUIRE(got.size() == 1);
    CHECK(got[0].file_seed == 873654221);
    CHECK(got[0].upper_bound == 14);
    CHECK(got[0].lower_bound == 12);
}

TEST_CASE("a header with only a seed keeps the bounds unset") {
    std::istringstream in(
        "2 2 999\n"
        "1 2\n"
        "3 4\n");
    auto got = parse_taillard(in);
    REQUIRE(got.size() == 1);
    CHECK(got[0].file_seed == 999);
    CHECK_FALSE(got[0].upper_bound.has_value());
    CHECK_FALSE(got[0].lower_bound.has_value());
}

TEST_CASE("numbers on later lines belong to the matrix, not the header") {
    // header is bare "2 2"; the 1 on the next line starts machine row 0
    std::istringstream in(
        "2 2\n"
        "1\n"
        "2\n"
        "3 4\n");
    auto got = parse_taillard(in);
    REQUIRE(got.size() == 1);
    CHECK(got[0].p(0, 0) == 1);
    CHECK(got[0].p(1, 0) == 2);
    CHECK(got[0].p(0, 1) == 3);
    CHECK(got[0].p(1, 1) == 4);
}

TEST_CASE("comments and blank lines are ignored") {
    std::istringstream in(
        "# two jobs, two machines\n"
        "\n"
        "2 2   # header\n"
        "1 2   # first machine\n"
        "3 4\n");
    auto got = parse_taillard(in);
    REQUIRE(got.size() == 1);
    CHECK(got[0].p(1, 1) == 4);
}

TEST_CASE("several instances in one stream get numbered names") {
    std::istringstream in(
        "2 1\n"
        "1 2\n"
        "2 1\n"
        "3 4\n");
    auto got = parse_taillard(in, "batch");
    REQUIRE(got.size() == 2);
    CHECK(got[0].name == "batch[0]");
    CHECK(got[1].name == "batch[1]");
    CHECK(got[1].p(1, 0) == 4);
}

TEST_CASE("parse errors carry a 1-based line number") {
    std::istringstream truncated(
        "2 2\n"
        "1 2\n"
        "3\n");
    try {
        parse_taillard(truncated, "t");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        std::string msg = e.what();
        CHECK(msg.find("line") != std::string::npos);
    }

    std::istringstream garbage("2 2\nx y\n");
    CHECK_THROWS_AS(parse_taillard(garbage), ParseError);

    std::istringstream empty("   \n# nothing\n");
    CHECK_THROWS_AS(parse_taillard(empty), ParseError);

    std::istringstream hugedims("90000 2\n");
    CHECK_THROWS_AS(parse_taillard(hugedims), ParseError);
}

TEST_CASE("negative processing times are rejected") {
    std::istringstream in(
        "2 1\n"
        "3 -4\n");
    CHECK_THROWS_AS(parse_taillard(in), ParseError);
}

TEST_CASE("write then parse round-trips an instance") {
    Instance inst = generate_random(7, 3, 40.0, 15.0, 2024);
    inst.file_seed = 555;
    inst.upper_bound = 123;
    inst.lower_bound = 45;
    std::ostringstream out;
    write_taillard(out, inst);
    std::istringstream back(out.str());
    auto got = parse_taillard(back, inst.name);
    REQUIRE(got.size() == 1);
    CHECK(got[0].proc == inst.proc);
    CHECK(got[0].jobs == inst.jobs);
    CHECK(got[0].machines == inst.machines);
    CHECK(got[0].file_seed == 555);
    CHECK(got[0].upper_bound == 123);
    CHECK(got[0].lower_bound == 45);
}

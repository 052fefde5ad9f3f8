#include <doctest.h>

#include <vector>

#include "flowbb/message.hpp"

using namespace flowbb;

namespace {

Message roundtrip(const Message& msg, WireFormat wire) {
    return decode(encode(msg, wire), wire);
}

void check_equal(const Message& a, const Message& b) {
    CHECK(a.kind == b.kind);
    CHECK(a.src == b.src);
    CHECK(a.dst == b.dst);
    CHECK(a.ask_count == b.ask_count);
    CHECK(a.has_completion == b.has_completion);
    CHECK(a.completed_id == b.completed_id);
    CHECK(a.exec_time == b.exec_time);
    CHECK(a.ids == b.ids);
    CHECK(a.best == b.best);
    CHECK(a.load.pending == b.load.pending);
    CHECK(a.load.done == b.load.done);
    CHECK(a.load.total_exec == b.load.total_exec);
    CHECK(a.load.idle_workers == b.load.idle_workers);
}

}  // namespace

TEST_CASE("every message kind survives an encode/decode round-trip") {
    WireFormat wire{8};
    LoadSnapshot load;
    load.pending = 12;
    load.done = 34;
    load.total_exec = 5600;
    load.idle_workers = 2;
    const std::vector<Message> all = {
        Message::ask(5, 1, 1),
        Message::ask_with_completion(5, 1, 1, u128{90210}, 777),
        Message::grant(1, 5, u128{42}),
        Message::no_tasks(1, 5),
        Message::poll(0, 1),
        Message::solution(5, 1, 1234),
        Message::report(1, 0, load),
        Message::single(1, 2, u128{7}),
        Message::batch(1, 2, {u128{9}, u128{10}, u128{11}}),
        Message::batch(1, 2, {}),
        Message::terminate(0, 1),
    };
    for (const Message& msg : all) check_equal(msg, roundtrip(msg, wire));
}

TEST_CASE("wide ids need the 16-byte payload width") {
    CHECK(WireFormat::for_jobs(20).width == 8);
    CHECK(WireFormat::for_jobs(21).width == 16);

    u128 wide = (u128{1} << 100) + 12345;
    Message msg = Message::grant(1, 5, wide);
    Message back = roundtrip(msg, WireFormat{16});
    CHECK(back.ids == std::vector<u128>{wide});
    // the same id cannot fit an 8-byte slot
    CHECK_THROWS_AS(encode(msg, WireFormat{8}), CapacityError);
}

TEST_CASE("byte accounting follows overhead plus width times integers") {
    WireFormat w8{8};
    WireFormat w16{16};

    CHECK(payload_ints(Message::ask(5, 1, 2)) == 1);
    CHECK(payload_ints(Message::ask_with_completion(5, 1, 1, u128{3}, 9)) == 3);
    CHECK(payload_ints(Message::grant(1, 5, u128{3})) == 1);
    CHECK(payload_ints(Message::no_tasks(1, 5)) == 0);
    CHECK(payload_ints(Message::poll(0, 1)) == 0);
    CHECK(payload_ints(Message::solution(5, 1, 10)) == 1);
    CHECK(payload_ints(Message::report(1, 0, {})) == 4);
    CHECK(payload_ints(Message::single(1, 2, u128{3})) == 1);
    CHECK(payload_ints(Message::batch(1, 2, {u128{1}, u128{2}})) == 3);
    CHECK(payload_ints(Message::terminate(0, 1)) == 0);

    CHECK(transfer_cost(Message::terminate(0, 1), w8) == kFrameOverhead);
    CHECK(transfer_cost(Message::grant(1, 5, u128{3}), w8) == kFrameOverhead + 8);
    CHECK(transfer_cost(Message::grant(1, 5, u128{3}), w16) == kFrameOverhead + 16);
    CHECK(transfer_cost(Message::batch(1, 2, {u128{1}, u128{2}, u128{3}}), w8) ==
          kFrameOverhead + 8 * 4);

    // encoded frames have exactly the accounted size
    Message msg = Message::batch(3, 4, {u128{5}, u128{6}});
    CHECK(encode(msg, w8).size() == transfer_cost(msg, w8));
    CHECK(encode(msg, w16).size() == transfer_cost(msg, w16));
}

TEST_CASE("a flipped byte is caught by the checksum") {
    Message msg = Message::batch(1, 2, {u128{100}, u128{200}});
    WireFormat wire{8};
    for (std::size_t i = 0; i < transfer_cost(msg, wire); ++i) {
        std::vector<std::uint8_t> frame = encode(msg, wire);
        frame[i] ^= 0x40;
        // some flips stay decodable-but-wrong only if they cancel in the
        // checksum; a single-bit flip never does
        CHECK_THROWS_AS(decode(frame, wire), ProtocolViolation);
    }
}

TEST_CASE("truncated or inconsistent frames are rejected") {
    WireFormat wire{8};
    std::vector<std::uint8_t> frame = encode(Message::grant(1, 5, u128{9}), wire);
    std::vector<std::uint8_t> cut(frame.begin(), frame.end() - 3);
    CHECK_THROWS_AS(decode(cut, wire), ProtocolViolation);
    CHECK_THROWS_AS(decode({}, wire), ProtocolViolation);

    // a batch whose leading count disagrees with the ids present
    Message bad = Message::batch(1, 2, {u128{5}, u128{6}});
    std::vector<std::uint8_t> tampered = encode(bad, wire);
    tampered[7] = 9;  // low byte of the leading count integer
    // repair the checksum so only the arity check can complain
    std::uint8_t sum = 0;
    for (std::size_t i = 0; i + 1 < tampered.size(); ++i) sum ^= tampered[i];
    tampered.back() = sum;
    CHECK_THROWS_AS(decode(tampered, wire), ProtocolViolation);
}

TEST_CASE("the encoder enforces per-kind payload shapes") {
    WireFormat wire{8};
    Message two_grant = Message::grant(1, 5, u128{1});
    two_grant.ids.push_back(u128{2});
    CHECK_THROWS_AS(encode(two_grant, wire), ProtocolViolation);

    Message bad_single = Message::single(1, 2, u128{1});
    bad_single.ids.clear();
    CHECK_THROWS_AS(encode(bad_single, wire), ProtocolViolation);
}

TEST_CASE("trace lines are tab-separated and stable") {
    TraceEvent ev;
    ev.time = 17;
    ev.kind = MsgKind::TaskGrant;
    ev.src = 1;
    ev.dst = 5;
    ev.bytes = 16;
    ev.items = 1;
    CHECK(format_trace_line(ev) == "17\ttask_grant\t1\t5\t16");
}

TEST_CASE("kind names are distinct and lowercase") {
    std::vector<std::string> names;
    for (int k = 0; k < kMsgKinds; ++k)
        names.emplace_back(kind_name(static_cast<MsgKind>(k)));
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            CHECK(names[i] != names[j]);
    CHECK(names[0] == "ask_for_tasks");
    CHECK(names[7] == "terminate");
}

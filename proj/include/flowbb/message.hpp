#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowbb/common.hpp"

namespace flowbb {

// Every runtime message is one of these eight kinds. The solving payload a
// message moves around is subproblem *ids*, never materialized trees — the
// receiver reconstructs the node from the id alone.
enum class MsgKind : std::uint8_t {
    AskForTasks = 0,        // worker -> master, or supervisor -> master (pull)
    TaskGrant = 1,          // master -> worker; empty payload means "none left"
    UpdateSolutionRequest,  // supervisor -> master poll, fanned down to nobody
    BestSolution,           // any -> any, carries the makespan only
    LoadReport,             // master -> supervisor load/statistics snapshot
    ReallocateSingle,       // one id moving between masters (via supervisor)
    ReallocateBatch,        // count-tagged run of ids moving between masters
    Terminate,              // supervisor -> all, shut down
};
inline constexpr int kMsgKinds = 8;

const char* kind_name(MsgKind kind);

struct LoadSnapshot {
    std::uint64_t pending = 0;   // queued subproblems not yet granted
    std::uint64_t done = 0;      // subproblems fully solved under this master
    Time total_exec = 0;         // execution time summed over the done ones
    std::uint64_t idle_workers = 0;
};

// One in-flight message. A flat struct rather than a variant: each kind
// reads only its own fields, and the wire codec encodes exactly those.
struct Message {
    MsgKind kind = MsgKind::Terminate;
    int src = 0;
    int dst = 0;

    std::uint64_t ask_count = 0;      // AskForTasks: how many subproblems wanted
    bool has_completion = false;      // AskForTasks may piggyback a completion
    u128 completed_id = 0;            //   ... the just-finished subproblem
    Time exec_time = 0;               //   ... and what it cost to solve
    std::vector<u128> ids;            // TaskGrant / Reallocate*: the moving ids
    Time best = kNoIncumbent;         // BestSolution: the makespan
    LoadSnapshot load;                // LoadReport

    static Message ask(int src, int dst, std::uint64_t count);
    static Message ask_with_completion(int src, int dst, std::uint64_t count, u128 done_id,
                                       Time exec_time);
    static Message grant(int src, int dst, u128 id);
    static Message no_tasks(int src, int dst);
    static Message poll(int src, int dst);
    static Message solution(int src, int dst, Time best);
    static Message report(int src, int dst, const LoadSnapshot& load);
    static Message single(int src, int dst, u128 id);
    static Message batch(int src, int dst, std::vector<u128> ids);
    static Message terminate(int src, int dst);
};

// Payload width and byte accounting. Frames look like
//
//   [kind:1][src:2][dst:2][length:2][payload: length bytes][checksum:1]
//
// for 8 bytes of fixed overhead; the payload is a run of little-endian
// integers, each `width` bytes. 8-byte integers hold any id up to n = 20
// jobs; beyond that ids outgrow 64 bits and the width doubles.
struct WireFormat {
    int width = 8;

    static WireFormat for_jobs(int n_jobs) { return {n_jobs > 20 ? 16 : 8}; }
};
inline constexpr std::size_t kFrameOverhead = 8;

// How many payload integers each message carries; the basis for both the
// byte accounting and the encoder.
std::size_t payload_ints(const Message& msg);

// Bytes on the wire for one message: overhead + width * payload_ints.
std::size_t transfer_cost(const Message& msg, WireFormat wire);

// Checksummed binary frame round-trip. decode throws ProtocolViolation on
// a bad checksum, unknown kind, or inconsistent lengths.
std::vector<std::uint8_t> encode(const Message& msg, WireFormat wire);
Message decode(const std::vector<std::uint8_t>& bytes, WireFormat wire);

// One line of the message trace: when, what, between whom, how big.
struct TraceEvent {
    Time time = 0;
    MsgKind kind = MsgKind::Terminate;
    int src = 0;
    int dst = 0;
    std::size_t bytes = 0;
    std::size_t items = 0;  // subproblem ids carried, for conservation audits
};

std::string format_trace_line(const TraceEvent& ev);  // time\tkind\tsrc\tdst\tbytes

}  // namespace flowbb

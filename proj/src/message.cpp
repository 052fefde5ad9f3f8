#include "flowbb/message.hpp"

#include <sstream>

namespace flowbb {

const char* kind_name(MsgKind kind) {
    switch (kind) {
        case MsgKind::AskForTasks: return "ask_for_tasks";
        case MsgKind::TaskGrant: return "task_grant";
        case MsgKind::UpdateSolutionRequest: return "update_solution_request";
        case MsgKind::BestSolution: return "best_solution";
        case MsgKind::LoadReport: return "load_report";
        case MsgKind::ReallocateSingle: return "reallocate_single";
        case MsgKind::ReallocateBatch: return "reallocate_batch";
        case MsgKind::Terminate: return "terminate";
    }
    return "?";
}

Message Message::ask(int src, int dst, std::uint64_t count) {
    Message m;
    m.kind = MsgKind::AskForTasks;
    m.src = src;
    m.dst = dst;
    m.ask_count = count;
    return m;
}

Message Message::ask_with_completion(int src, int dst, std::uint64_t count, u128 done_id,
                                     Time exec_time) {
    Message m = ask(src, dst, count);
    m.has_completion = true;
    m.completed_id = done_id;
    m.exec_time = exec_time;
    return m;
}

Message Message::grant(int src, int dst, u128 id) {
    Message m;
    m.kind = MsgKind::TaskGrant;
    m.src = src;
    m.dst = dst;
    m.ids.push_back(id);
    return m;
}

Message Message::no_tasks(int src, int dst) {
    Message m;
    m.kind = MsgKind::TaskGrant;
    m.src = src;
    m.dst = dst;
    return m;
}

Message Message::poll(int src, int dst) {
    Message m;
    m.kind = MsgKind::UpdateSolutionRequest;
    m.src = src;
    m.dst = dst;
    return m;
}

Message Message::solution(int src, int dst, Time best) {
    Message m;
    m.kind = MsgKind::BestSolution;
    m.src = src;
    m.dst = dst;
    m.best = best;
    return m;
}

Message Message::report(int src, int dst, const LoadSnapshot& load) {
    Message m;
    m.kind = MsgKind::LoadReport;
    m.src = src;
    m.dst = dst;
    m.load = load;
    return m;
}

Message Message::single(int src, int dst, u128 id) {
    Message m;
    m.kind = MsgKind::ReallocateSingle;
    m.src = src;
    m.dst = dst;
    m.ids.push_back(id);
    return m;
}

Message Message::batch(int src, int dst, std::vector<u128> ids) {
    Message m;
    m.kind = MsgKind::ReallocateBatch;
    m.src = src;
    m.dst = dst;
    m.ids = std::move(ids);
    return m;
}

Message Message::terminate(int src, int dst) {
    Message m;
    m.kind = MsgKind::Terminate;
    m.src = src;
    m.dst = dst;
    return m;
}

std::size_t payload_ints(const Message& msg) {
    switch (msg.kind) {
        case MsgKind::AskForTasks:
            return msg.has_completion ? 3 : 1;  // count [, finished id, exec time]
        case MsgKind::TaskGrant:
            return msg.ids.size();  // 0 = nothing left, 1 = the granted id
        case MsgKind::UpdateSolutionRequest:
            return 0;
        case MsgKind::BestSolution:
            return 1;
        case MsgKind::LoadReport:
            return 4;  // pending, done, total exec, idle workers
        case MsgKind::ReallocateSingle:
            return 1;
        case MsgKind::ReallocateBatch:
            return 1 + msg.ids.size();  // leading count, then the ids
        case MsgKind::Terminate:
            return 0;
    }
    return 0;
}

std::size_t transfer_cost(const Message& msg, WireFormat wire) {
    return kFrameOverhead + static_cast<std::size_t>(wire.width) * payload_ints(msg);
}

namespace {

void put_le(std::vector<std::uint8_t>& out, u128 value, int width) {
    for (int i = 0; i < width; ++i) {
        out.push_back(static_cast<std::uint8_t>(value & 0xff));
        value >>= 8;
    }
}

u128 get_le(const std::vector<std::uint8_t>& in, std::size_t at, int width) {
    u128 value = 0;
    for (int i = width - 1; i >= 0; --i) value = (value << 8) | in[at + i];
    return value;
}

void check_fits(u128 value, int width, const char* what) {
    if (width >= 16) return;
    if (value >> (8 * width))
        throw CapacityError(std::string(what) + " does not fit the configured integer width");
}

std::vector<u128> payload_values(const Message& msg) {
    std::vector<u128> vals;
    switch (msg.kind) {
        case MsgKind::AskForTasks:
            vals.push_back(msg.ask_count);
            if (msg.has_completion) {
                vals.push_back(msg.completed_id);
                vals.push_back(static_cast<u128>(msg.exec_time));
            }
            break;
        case MsgKind::TaskGrant:
        case MsgKind::ReallocateSingle:
            for (u128 id : msg.ids) vals.push_back(id);
            break;
        case MsgKind::UpdateSolutionRequest:
        case MsgKind::Terminate:
            break;
        case MsgKind::BestSolution:
            vals.push_back(static_cast<u128>(msg.best));
            break;
        case MsgKind::LoadReport:
            vals.push_back(msg.load.pending);
            vals.push_back(msg.load.done);
            vals.push_back(static_cast<u128>(msg.load.total_exec));
            vals.push_back(msg.load.idle_workers);
            break;
        case MsgKind::ReallocateBatch:
            vals.push_back(msg.ids.size());
            for (u128 id : msg.ids) vals.push_back(id);
            break;
    }
    return vals;
}

}  // namespace

std::vector<std::uint8_t> encode(const Message& msg, WireFormat wire) {
    if (msg.kind == MsgKind::ReallocateSingle && msg.ids.size() != 1)
        throw ProtocolViolation("a single-id reallocation must carry exactly one id");
    if (msg.kind == MsgKind::TaskGrant && msg.ids.size() > 1)
        throw ProtocolViolation("a task grant carries at most one id");

    std::vector<u128> vals = payload_values(msg);
    std::size_t length = vals.size() * static_cast<std::size_t>(wire.width);
    if (length > 0xffff)
        throw CapacityError("payload of " + std::to_string(length) +
                            " bytes exceeds the 16-bit frame length field");
    if (msg.src < 0 || msg.src > 0xffff || msg.dst < 0 || msg.dst > 0xffff)
        throw CapacityError("actor id does not fit the 16-bit address field");

    std::vector<std::uint8_t> out;
    out.reserve(kFrameOverhead + length);
    out.push_back(static_cast<std::uint8_t>(msg.kind));
    put_le(out, static_cast<u128>(msg.src), 2);
    put_le(out, static_cast<u128>(msg.dst), 2);
    put_le(out, static_cast<u128>(length), 2);
    for (u128 v : vals) {
        check_fits(v, wire.width, kind_name(msg.kind));
        put_le(out, v, wire.width);
    }
    std::uint8_t checksum = 0;
    for (std::uint8_t b : out) checksum ^= b;
    out.push_back(checksum);
    return out;
}

Message decode(const std::vector<std::uint8_t>& bytes, WireFormat wire) {
    if (bytes.size() < kFrameOverhead)
        throw ProtocolViolation("frame shorter than the fixed overhead");
    std::uint8_t checksum = 0;
    for (std::size_t i = 0; i + 1 < bytes.size(); ++i) checksum ^= bytes[i];
    if (checksum != bytes.back()) throw ProtocolViolation("frame checksum mismatch");

    if (bytes[0] >= kMsgKinds) throw ProtocolViolation("unknown message kind on the wire");
    Message msg;
    msg.kind = static_cast<MsgKind>(bytes[0]);
    msg.src = static_cast<int>(get_le(bytes, 1, 2));
    msg.dst = static_cast<int>(get_le(bytes, 3, 2));
    std::size_t length = static_cast<std::size_t>(get_le(bytes, 5, 2));
    if (bytes.size() != kFrameOverhead + length)
        throw ProtocolViolation("frame length field disagrees with the byte count");
    if (length % static_cast<std::size_t>(wire.width) != 0)
        throw ProtocolViolation("payload is not a whole number of integers");

    std::vector<u128> vals;
    for (std::size_t at = 7; at + wire.width <= 7 + length; at += wire.width)
        vals.push_back(get_le(bytes, at, wire.width));

    auto want = [&](std::size_t n) {
        if (vals.size() != n)
            throw ProtocolViolation(std::string("wrong payload size for ") +
                                    kind_name(msg.kind));
    };
    switch (msg.kind) {
        case MsgKind::AskForTasks:
            if (vals.size() != 1 && vals.size() != 3)
                throw ProtocolViolation("a task request carries one or three integers");
            msg.ask_count = static_cast<std::uint64_t>(vals[0]);
            if (vals.size() == 3) {
                msg.has_completion = true;
                msg.completed_id = vals[1];
                msg.exec_time = static_cast<Time>(vals[2]);
            }
            break;
        case MsgKind::TaskGrant:
            if (vals.size() > 1)
                throw ProtocolViolation("a task grant carries at most one id");
            msg.ids = vals;
            break;
        case MsgKind::UpdateSolutionRequest:
        case MsgKind::Terminate:
            want(0);
            break;
        case MsgKind::BestSolution:
            want(1);
            msg.best = static_cast<Time>(vals[0]);
            break;
        case MsgKind::LoadReport:
            want(4);
            msg.load.pending = static_cast<std::uint64_t>(vals[0]);
            msg.load.done = static_cast<std::uint64_t>(vals[1]);
            msg.load.total_exec = static_cast<Time>(vals[2]);
            msg.load.idle_workers = static_cast<std::uint64_t>(vals[3]);
            break;
        case MsgKind::ReallocateSingle:
            want(1);
            msg.ids = vals;
            break;
        case MsgKind::ReallocateBatch: {
            if (vals.empty())
                throw ProtocolViolation("a batch frame needs at least its count integer");
            std::size_t count = static_cast<std::size_t>(vals[0]);
            if (count != vals.size() - 1)
                throw ProtocolViolation("batch count disagrees with the ids present");
            msg.ids.assign(vals.begin() + 1, vals.end());
            break;
        }
    }
    return msg;
}

std::string format_trace_line(const TraceEvent& ev) {
    std::ostringstream out;
    out << ev.time << '\t' << kind_name(ev.kind) << '\t' << ev.src << '\t' << ev.dst << '\t'
        << ev.bytes;
    return out.str();
}

}  // namespace flowbb

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "flowbb/runtime.hpp"
#include "flowbb/tree.hpp"

namespace flowbb {

namespace {

class Mailbox {
public:
    void push(Message msg) {
        {
            std::lock_guard lock(mu_);
            q_.push_back(std::move(msg));
        }
        cv_.notify_one();
    }

    Message pop() {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return !q_.empty(); });
        Message msg = std::move(q_.front());
        q_.pop_front();
        return msg;
    }

    std::optional<Message> pop_for(std::chrono::milliseconds timeout) {
        std::unique_lock lock(mu_);
        if (!cv_.wait_for(lock, timeout, [&] { return !q_.empty(); })) return std::nullopt;
        Message msg = std::move(q_.front());
        q_.pop_front();
        return msg;
    }

    std::optional<Message> try_pop() {
        std::lock_guard lock(mu_);
        if (q_.empty()) return std::nullopt;
        Message msg = std::move(q_.front());
        q_.pop_front();
        return msg;
    }

private:
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<Message> q_;
};

using Clock = std::chrono::steady_clock;

// Everything the threads share: mailboxes, counters, the audit set.
struct Shared {
    const Instance& inst;
    const RunConfig& cfg;
    WireFormat wire;
    std::vector<Mailbox> boxes;
    Clock::time_point t0;

    std::atomic<std::uint64_t> messages{0};
    std::atomic<std::uint64_t> bytes{0};
    std::array<std::atomic<std::uint64_t>, kMsgKinds> messages_by_kind{};
    std::array<std::atomic<std::uint64_t>, kMsgKinds> bytes_by_kind{};
    std::atomic<std::uint64_t> nodes_used{0};
    std::atomic<std::uint64_t> particles_done{0};
    std::atomic<std::int64_t> completion_ms{0};
    std::atomic<bool> truncated{false};
    std::atomic<bool> duplicate_grant{false};

    std::mutex audit_mu;
    std::set<u128> executed;
    std::mutex trace_mu;
    std::vector<TraceEvent> trace;
    std::mutex err_mu;
    std::string error;  // first failure seen by any thread

    Shared(const Instance& i, const RunConfig& c, std::size_t n_actors)
        : inst(i), cfg(c), wire(WireFormat::for_jobs(i.jobs)), boxes(n_actors),
          t0(Clock::now()) {}

    Time elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0)
            .count();
    }

    void send_all(std::vector<Message>& msgs) {
        for (Message& m : msgs) {
            std::size_t cost = transfer_cost(m, wire);
            messages.fetch_add(1, std::memory_order_relaxed);
            bytes.fetch_add(cost, std::memory_order_relaxed);
            auto k = static_cast<std::size_t>(m.kind);
            messages_by_kind[k].fetch_add(1, std::memory_order_relaxed);
            bytes_by_kind[k].fetch_add(cost, std::memory_order_relaxed);
            if (cfg.record_trace) {
                std::lock_guard lock(trace_mu);
                trace.push_back({elapsed_ms(), m.kind, m.src, m.dst, cost, m.ids.size()});
            }
            boxes[static_cast<std::size_t>(m.dst)].push(std::move(m));
        }
        msgs.clear();
    }
};

void worker_loop(Shared& sh, WorkerActor& w) {
    Mailbox& box = sh.boxes[static_cast<std::size_t>(w.id())];
    StepOutput out = w.on_start();
    sh.send_all(out.messages);
    while (!w.terminated()) {
        Message msg = box.pop();
        out = w.on_message(msg);
        sh.send_all(out.messages);
        if (!out.exec) continue;

        u128 id = *out.exec;
        {
            std::lock_guard lock(sh.audit_mu);
            if (!sh.executed.insert(id).second) sh.duplicate_grant = true;
        }
        auto started = Clock::now();
        SolveResult res;
        std::vector<Message> deferred;
        std::uint64_t used = sh.nodes_used.load(std::memory_order_relaxed);
        if (sh.cfg.node_budget && used >= sh.cfg.node_budget) {
            res.value = w.best_known();
            res.complete = false;
            sh.truncated = true;
        } else {
            SolveOptions opt;
            opt.initial_incumbent = w.best_known();
            opt.bound = sh.cfg.bound;
            if (sh.cfg.node_budget) opt.node_budget = sh.cfg.node_budget - used;
            // Pick up incumbent improvements that land mid-search; anything
            // else waits until the search returns.
            opt.poll = [&]() {
                PollAction act;
                while (auto m = box.try_pop()) {
                    if (m->kind == MsgKind::BestSolution) {
                        if (!act.better || m->best < *act.better) act.better = m->best;
                    } else {
                        deferred.push_back(std::move(*m));
                    }
                }
                return act;
            };
            res = solve_subtree(sh.inst, materialize(sh.inst, id, sh.cfg.bound), opt);
            sh.nodes_used.fetch_add(res.stats.nodes_expanded, std::memory_order_relaxed);
            if (!res.complete) sh.truncated = true;
        }
        Time cost = std::max<Time>(
            1, std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - started)
                   .count());
        sh.particles_done.fetch_add(1, std::memory_order_relaxed);
        Time done_at = sh.elapsed_ms();
        std::int64_t prev = sh.completion_ms.load(std::memory_order_relaxed);
        while (prev < done_at &&
               !sh.completion_ms.compare_exchange_weak(prev, done_at,
                                                       std::memory_order_relaxed)) {
        }
        out = w.on_exec_complete({id, std::move(res), cost});
        sh.send_all(out.messages);
        for (Message& m : deferred) {
            StepOutput extra = w.on_message(m);
            sh.send_all(extra.messages);
            // The protocol never grants mid-execution, so no exec here.
            if (extra.exec)
                throw ProtocolViolation("unexpected grant delivered during a search");
        }
    }
}

void master_loop(Shared& sh, MasterActor& m) {
    Mailbox& box = sh.boxes[static_cast<std::size_t>(m.id())];
    StepOutput out = m.on_start();
    sh.send_all(out.messages);
    while (!m.terminated()) {
        Message msg = box.pop();
        out = m.on_message(msg);
        sh.send_all(out.messages);
    }
}

void supervisor_loop(Shared& sh, SupervisorActor& s) {
    Mailbox& box = sh.boxes[kSupervisorId];
    StepOutput out = s.on_start();
    sh.send_all(out.messages);
    const auto tick = std::chrono::milliseconds(
        std::max<Time>(1, sh.cfg.topology.sync_interval));
    while (!s.finished()) {
        if (auto msg = box.pop_for(tick)) {
            out = s.on_message(*msg);
        } else {
            out = s.on_tick();
        }
        sh.send_all(out.messages);
    }
}

// A thread that dies mid-protocol would leave the others blocked on their
// mailboxes forever; on any failure, record it and poison every mailbox
// with Terminate so the whole hierarchy unwinds and joins cleanly.
template <typename F>
void guarded(Shared& sh, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        {
            std::lock_guard lock(sh.err_mu);
            if (sh.error.empty()) sh.error = e.what();
        }
        for (std::size_t i = 0; i < sh.boxes.size(); ++i)
            sh.boxes[i].push(Message::terminate(kSupervisorId, static_cast<int>(i)));
    }
}

}  // namespace

RunMetrics run_threaded(const Instance& inst, const RunConfig& cfg) {
    const int n = inst.jobs;
    if (cfg.k_split < 0 || cfg.k_split >= n)
        throw std::invalid_argument("k-split must be in [0, n-1]");

    const std::size_t n_masters = cfg.topology.n_masters();
    const std::size_t n_workers = cfg.topology.n_workers();
    std::vector<u128> initial = split_frontier(n, cfg.k_split, cfg.max_particles);

    std::vector<MasterActor> masters;
    std::vector<WorkerActor> workers;
    std::vector<ActorId> master_ids;
    masters.reserve(n_masters);
    workers.reserve(n_workers);
    ActorId next_worker = static_cast<ActorId>(1 + n_masters);
    for (std::size_t i = 0; i < n_masters; ++i) {
        ActorId mid = static_cast<ActorId>(1 + i);
        master_ids.push_back(mid);
        std::vector<ActorId> crew;
        for (std::size_t w = 0; w < cfg.topology.workers_per_master[i]; ++w)
            crew.push_back(next_worker++);
        masters.emplace_back(mid, crew, cfg.transfer, cfg.initial_best);
        for (ActorId wid : crew) workers.emplace_back(wid, mid, cfg.initial_best);
    }

    SupervisorConfig scfg;
    scfg.strategy = cfg.strategy;
    scfg.transfer = cfg.transfer;
    scfg.pfs_weight = cfg.pfs_weight;
    scfg.masters = master_ids;
    scfg.workers_per_master = cfg.topology.workers_per_master;
    scfg.initial_ids = initial;
    scfg.n_jobs = n;
    scfg.seed = cfg.seed;
    scfg.initial_best = cfg.initial_best;
    SupervisorActor supervisor(scfg);

    Shared sh(inst, cfg, 1 + n_masters + n_workers);

    std::vector<std::thread> threads;
    threads.reserve(1 + n_masters + n_workers);
    threads.emplace_back([&] { guarded(sh, [&] { supervisor_loop(sh, supervisor); }); });
    for (MasterActor& m : masters)
        threads.emplace_back([&sh, &m] { guarded(sh, [&] { master_loop(sh, m); }); });
    for (WorkerActor& w : workers)
        threads.emplace_back([&sh, &w] { guarded(sh, [&] { worker_loop(sh, w); }); });
    for (std::thread& t : threads) t.join();

    if (!sh.error.empty()) throw ProtocolViolation(sh.error);
    if (sh.duplicate_grant) throw ProtocolViolation("a subproblem was granted twice");

    RunMetrics metrics;
    metrics.particles_total = initial.size();
    metrics.particles_done = sh.particles_done.load();
    metrics.completion_time = sh.completion_ms.load();
    metrics.drain_time = sh.elapsed_ms();
    metrics.complete = !sh.truncated.load();
    metrics.messages = sh.messages.load();
    metrics.bytes = sh.bytes.load();
    for (std::size_t k = 0; k < kMsgKinds; ++k) {
        metrics.messages_by_kind[k] = sh.messages_by_kind[k].load();
        metrics.bytes_by_kind[k] = sh.bytes_by_kind[k].load();
    }
    metrics.trace = std::move(sh.trace);

    metrics.makespan = supervisor.best_known();
    for (const WorkerActor& w : workers) {
        metrics.search += w.stats();
        if (w.found_value() < metrics.makespan) metrics.makespan = w.found_value();
    }
    for (const WorkerActor& w : workers) {
        if (!w.found_permutation().empty() && w.found_value() == metrics.makespan &&
            metrics.best.empty())
            metrics.best = w.found_permutation();
    }
    for (std::size_t i = 0; i < masters.size(); ++i) {
        MasterStats s;
        s.master_id = masters[i].id();
        s.n_workers = cfg.topology.workers_per_master[i];
        s.pending = masters[i].snapshot().pending;
        s.completed = masters[i].done();
        s.total_exec_time = masters[i].total_exec();
        metrics.per_master.push_back(s);
    }
    if (metrics.particles_done != metrics.particles_total)
        throw ProtocolViolation("terminated with subproblems unaccounted for");
    return metrics;
}

}  // namespace flowbb

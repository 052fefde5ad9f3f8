#include "flowbb/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "flowbb/tree.hpp"

namespace flowbb {

std::size_t Topology::n_workers() const {
    std::size_t total = 0;
    for (std::size_t w : workers_per_master) total += w;
    return total;
}

Topology parse_topology(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("topology must look like M:w1,w2,... got '" + text + "'");
    Topology topo;
    topo.workers_per_master.clear();
    std::size_t n_masters = 0;
    try {
        n_masters = std::stoul(text.substr(0, colon));
        std::vector<std::size_t> counts;
        std::istringstream rest(text.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ','))
            counts.push_back(std::stoul(item));
        if (n_masters == 0 || counts.empty()) throw std::invalid_argument(text);
        for (std::size_t c : counts)
            if (c == 0) throw std::invalid_argument(text);
        for (std::size_t i = 0; i < n_masters; ++i)
            topo.workers_per_master.push_back(counts[i % counts.size()]);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse topology '" + text + "'");
    }
    return topo;
}

HeterogeneityModel HeterogeneityModel::mixed(std::vector<double> f) {
    if (f.empty()) throw std::invalid_argument("need at least one speed factor");
    for (double x : f)
        if (!(x > 0.0)) throw std::invalid_argument("speed factors must be positive");
    HeterogeneityModel model;
    model.factors = std::move(f);
    return model;
}

HeterogeneityModel parse_het(const std::string& text) {
    if (text == "homogeneous") return HeterogeneityModel::homogeneous();
    const std::string prefix = "mixed:";
    if (text.rfind(prefix, 0) == 0) {
        std::vector<double> factors;
        std::istringstream rest(text.substr(prefix.size()));
        std::string item;
        try {
            while (std::getline(rest, item, ',')) factors.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse speed factors in '" + text + "'");
        }
        return HeterogeneityModel::mixed(std::move(factors));
    }
    throw std::invalid_argument("heterogeneity must be 'homogeneous' or 'mixed:f1,f2,...'");
}

RunMode parse_mode(const std::string& text) {
    if (text == "sim") return RunMode::Sim;
    if (text == "threads") return RunMode::Threads;
    throw std::invalid_argument("mode must be 'sim' or 'threads', got '" + text + "'");
}

namespace {

struct SimEvent {
    enum Kind { Start, Tick, Arrival, ExecDone };
    Time t = 0;
    std::uint64_t seq = 0;
    Kind kind = Start;
    ActorId target = 0;
    Message msg;          // Arrival
    ExecOutcome outcome;  // ExecDone
};

struct LaterFirst {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
        if (a.t != b.t) return a.t > b.t;
        return a.seq > b.seq;
    }
};

}  // namespace

RunMetrics run_simulated(const Instance& inst, const RunConfig& cfg) {
    const int n = inst.jobs;
    if (cfg.k_split < 0 || cfg.k_split >= n)
        throw std::invalid_argument("k-split must be in [0, n-1]");
    if (cfg.link_latency < 0) throw std::invalid_argument("latency cannot be negative");

    const WireFormat wire = WireFormat::for_jobs(n);
    const std::size_t n_masters = cfg.topology.n_masters();
    const std::size_t n_workers = cfg.topology.n_workers();
    std::vector<u128> initial = split_frontier(n, cfg.k_split, cfg.max_particles);

    // Actor ids: supervisor 0, masters 1..M, then workers grouped by master.
    std::vector<MasterActor> masters;
    std::vector<WorkerActor> workers;
    std::vector<ActorId> master_ids;
    std::vector<std::size_t> worker_of;  // actor id -> index into `workers`
    masters.reserve(n_masters);
    workers.reserve(n_workers);
    {
        ActorId next_worker = static_cast<ActorId>(1 + n_masters);
        for (std::size_t i = 0; i < n_masters; ++i) {
            ActorId mid = static_cast<ActorId>(1 + i);
            master_ids.push_back(mid);
            std::vector<ActorId> crew;
            for (std::size_t w = 0; w < cfg.topology.workers_per_master[i]; ++w)
                crew.push_back(next_worker++);
            masters.emplace_back(mid, crew, cfg.transfer, cfg.initial_best);
            for (ActorId wid : crew) {
                workers.emplace_back(wid, mid, cfg.initial_best);
                (void)wid;
            }
        }
    }
    auto worker_index = [&](ActorId id) {
        return static_cast<std::size_t>(id) - 1 - n_masters;
    };

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

    RunMetrics metrics;
    metrics.particles_total = initial.size();

    std::priority_queue<SimEvent, std::vector<SimEvent>, LaterFirst> queue;
    std::uint64_t seq = 0;
    auto push = [&](SimEvent ev) {
        ev.seq = seq++;
        queue.push(std::move(ev));
    };

    std::set<u128> executed;  // every id must be solved exactly once
    std::uint64_t nodes_used = 0;

    auto dispatch = [&](Time now, ActorId actor, StepOutput&& out) {
        for (Message& m : out.messages) {
            std::size_t bytes = transfer_cost(m, wire);
            ++metrics.messages;
            metrics.bytes += bytes;
            auto k = static_cast<std::size_t>(m.kind);
            ++metrics.messages_by_kind[k];
            metrics.bytes_by_kind[k] += bytes;
            if (cfg.record_trace)
                metrics.trace.push_back({now, m.kind, m.src, m.dst, bytes, m.ids.size()});
            SimEvent ev;
            ev.t = now + cfg.link_latency;
            ev.kind = SimEvent::Arrival;
            ev.target = m.dst;
            ev.msg = std::move(m);
            push(std::move(ev));
        }
        if (!out.exec) return;
        // The runtime performs the search on the worker's behalf, priced in
        // virtual time by the worker's speed factor.
        u128 id = *out.exec;
        if (!executed.insert(id).second)
            throw ProtocolViolation("subproblem " + to_string(id) + " granted twice");
        std::size_t widx = worker_index(actor);
        WorkerActor& w = workers[widx];
        SolveResult res;
        if (cfg.node_budget && nodes_used >= cfg.node_budget) {
            res.value = w.best_known();  // skipped: report no news, minimal cost
            res.complete = false;
            metrics.complete = false;
        } else {
            SolveOptions opt;
            opt.initial_incumbent = w.best_known();
            opt.bound = cfg.bound;
            if (cfg.node_budget) opt.node_budget = cfg.node_budget - nodes_used;
            res = solve_subtree(inst, materialize(inst, id, cfg.bound), opt);
            nodes_used += res.stats.nodes_expanded;
            if (!res.complete) metrics.complete = false;
        }
        double work = static_cast<double>(res.stats.nodes_expanded + res.stats.leaves_evaluated);
        Time cost = std::max<Time>(1, std::llround(work / cfg.het.factor_for(widx)));
        SimEvent ev;
        ev.t = now + cost;
        ev.kind = SimEvent::ExecDone;
        ev.target = actor;
        ev.outcome = {id, std::move(res), cost};
        push(std::move(ev));
    };

    {
        SimEvent ev;
        ev.kind = SimEvent::Start;
        ev.target = kSupervisorId;
        push(ev);
        for (ActorId mid : master_ids) {
            ev.target = mid;
            push(ev);
        }
        for (const WorkerActor& w : workers) {
            ev.target = w.id();
            push(ev);
        }
        SimEvent tick;
        tick.kind = SimEvent::Tick;
        tick.t = cfg.topology.sync_interval;
        tick.target = kSupervisorId;
        push(tick);
    }

    Time now = 0;
    while (!queue.empty()) {
        SimEvent ev = queue.top();
        queue.pop();
        now = ev.t;
        switch (ev.kind) {
            case SimEvent::Start:
                if (ev.target == kSupervisorId)
                    dispatch(now, ev.target, supervisor.on_start());
                else if (ev.target <= static_cast<ActorId>(n_masters))
                    dispatch(now, ev.target, masters[ev.target - 1].on_start());
                else
                    dispatch(now, ev.target, workers[worker_index(ev.target)].on_start());
                break;
            case SimEvent::Tick:
                if (supervisor.finished()) break;  // stop the clock, let it drain
                dispatch(now, kSupervisorId, supervisor.on_tick());
                {
                    SimEvent next;
                    next.kind = SimEvent::Tick;
                    next.t = now + cfg.topology.sync_interval;
                    next.target = kSupervisorId;
                    push(next);
                }
                break;
            case SimEvent::Arrival:
                if (ev.target == kSupervisorId)
                    dispatch(now, ev.target, supervisor.on_message(ev.msg));
                else if (ev.target <= static_cast<ActorId>(n_masters))
                    dispatch(now, ev.target, masters[ev.target - 1].on_message(ev.msg));
                else
                    dispatch(now, ev.target, workers[worker_index(ev.target)].on_message(ev.msg));
                break;
            case SimEvent::ExecDone:
                ++metrics.particles_done;
                metrics.completion_time = now;
                dispatch(now, ev.target,
                         workers[worker_index(ev.target)].on_exec_complete(ev.outcome));
                break;
        }
    }
    metrics.drain_time = now;

    if (!supervisor.finished())
        throw ProtocolViolation("the runtime went quiet before announcing termination");
    if (metrics.particles_done != metrics.particles_total)
        throw ProtocolViolation("terminated with " + std::to_string(metrics.particles_done) +
                                " of " + std::to_string(metrics.particles_total) +
                                " subproblems completed");

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
    return metrics;
}

RunMetrics run_experiment(const Instance& inst, const RunConfig& cfg) {
    return cfg.mode == RunMode::Sim ? run_simulated(inst, cfg) : run_threaded(inst, cfg);
}

}  // namespace flowbb

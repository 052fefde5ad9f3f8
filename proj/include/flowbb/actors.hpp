#pragma once

#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "flowbb/balance.hpp"
#include "flowbb/message.hpp"
#include "flowbb/solver.hpp"

namespace flowbb {

// Actor addressing: the supervisor is 0, masters are 1..M, workers follow.
using ActorId = int;
inline constexpr ActorId kSupervisorId = 0;

// What one actor step wants the runtime to do: deliver these messages, and
// (workers only) start solving this subproblem. The actors never touch the
// clock or the network themselves, so the same state machines drive both
// the simulated and the threaded runtime.
struct StepOutput {
    std::vector<Message> messages;
    std::optional<u128> exec;
};

// Handed back to a worker when the runtime finishes a solve on its behalf.
// `cost` is virtual time units in simulation, measured microseconds with
// real threads; either way it is what completion reports carry.
struct ExecOutcome {
    u128 id = 0;
    SolveResult result;
    Time cost = 0;
};

// Leaf of the hierarchy: asks its master for one subproblem at a time,
// solves it, reports the completion piggybacked on the next ask, and
// announces strict incumbent improvements.
class WorkerActor {
public:
    WorkerActor(ActorId self, ActorId master, Time initial_best = kNoIncumbent)
        : self_(self), master_(master), best_known_(initial_best) {}

    StepOutput on_start();
    StepOutput on_message(const Message& msg);
    StepOutput on_exec_complete(const ExecOutcome& outcome);

    ActorId id() const { return self_; }
    bool busy() const { return busy_; }
    bool terminated() const { return terminated_; }
    Time best_known() const { return best_known_; }
    // What this worker itself discovered (for end-of-run collection); the
    // permutation is empty until the worker improves on everything it knew.
    Time found_value() const { return found_value_; }
    const Permutation& found_permutation() const { return found_perm_; }
    const SearchStats& stats() const { return stats_; }

private:
    ActorId self_;
    ActorId master_;
    Time best_known_;
    Time found_value_ = kNoIncumbent;
    Permutation found_perm_;
    SearchStats stats_;
    u128 current_ = 0;
    bool busy_ = false;
    bool terminated_ = false;
};

// Middle tier: holds a pool of subproblem ids, feeds them to its workers on
// demand, answers supervisor pulls by surrendering ids, and reports load.
// Grants always hand out the lowest pending id (the shallowest node).
class MasterActor {
public:
    MasterActor(ActorId self, std::vector<ActorId> workers, Transfer transfer,
                Time initial_best = kNoIncumbent)
        : self_(self), workers_(std::move(workers)), transfer_(transfer),
          best_known_(initial_best) {}

    StepOutput on_start() { return {}; }
    StepOutput on_message(const Message& msg);

    ActorId id() const { return self_; }
    bool terminated() const { return terminated_; }
    Time best_known() const { return best_known_; }
    std::uint64_t done() const { return done_; }
    Time total_exec() const { return total_exec_; }
    LoadSnapshot snapshot() const;
    std::size_t in_flight() const { return running_.size(); }

private:
    StepOutput handle_worker_ask(const Message& msg);
    StepOutput handle_supervisor_pull(const Message& msg);
    void absorb_ids(const std::vector<u128>& ids, StepOutput& out);
    void grant_to(ActorId worker, StepOutput& out);
    Message make_report() const;

    ActorId self_;
    std::vector<ActorId> workers_;
    Transfer transfer_;
    Time best_known_;
    std::set<u128> pending_;          // queued ids, ordered = shallowest first
    std::map<ActorId, u128> running_; // granted, awaiting the completion report
    std::deque<ActorId> starving_;    // workers parked on an empty pool
    std::uint64_t done_ = 0;
    Time total_exec_ = 0;
    bool terminated_ = false;
};

struct SupervisorConfig {
    Strategy strategy = Strategy::Acwn;
    Transfer transfer = Transfer::MultiInOne;
    PfsWeight pfs_weight = PfsWeight::Literal;
    std::vector<ActorId> masters;
    std::vector<std::size_t> workers_per_master;
    std::vector<u128> initial_ids;
    int n_jobs = 0;              // sets the wire width, which caps batch sizes
    std::uint64_t seed = 0;      // feeds the random-recipient strategy only
    Time initial_best = kNoIncumbent;
};

// Top of the hierarchy. Distributes the initial frontier, polls the masters
// every tick, moves work toward starving masters (donor = most loaded;
// recipient chosen by the configured strategy), and terminates the run when
// every subproblem is reported done.
class SupervisorActor {
public:
    explicit SupervisorActor(SupervisorConfig cfg);

    StepOutput on_start();
    StepOutput on_message(const Message& msg);
    StepOutput on_tick();

    bool finished() const { return finished_; }
    Time best_known() const { return best_known_; }
    std::uint64_t total_particles() const { return total_; }
    const std::vector<MasterStats>& view() const { return view_; }

private:
    std::size_t index_of(ActorId master) const;
    void remedy(std::size_t starving, StepOutput& out);
    std::size_t pick_recipient(std::size_t exclude, std::uint64_t arriving);
    void send_ids(std::size_t master_index, const std::vector<u128>& ids, StepOutput& out);
    void check_termination(StepOutput& out);

    SupervisorConfig cfg_;
    std::vector<MasterStats> view_;       // last-known state, index-aligned
    std::vector<std::uint64_t> view_idle_;
    std::vector<char> pull_outstanding_;  // one pull in flight per donor, max
    std::mt19937_64 rng_;
    Time best_known_;
    std::uint64_t total_ = 0;
    bool finished_ = false;
};

}  // namespace flowbb

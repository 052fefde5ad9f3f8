#include "flowbb/actors.hpp"

#include <algorithm>

namespace flowbb {

namespace {

[[noreturn]] void unexpected(const char* who, const Message& msg) {
    throw ProtocolViolation(std::string(who) + " cannot handle a " + kind_name(msg.kind) +
                            " from actor " + std::to_string(msg.src));
}

}  // namespace

// ---------------------------------------------------------------- worker --

StepOutput WorkerActor::on_start() {
    StepOutput out;
    out.messages.push_back(Message::ask(self_, master_, 1));
    return out;
}

StepOutput WorkerActor::on_message(const Message& msg) {
    StepOutput out;
    if (terminated_) return out;
    switch (msg.kind) {
        case MsgKind::TaskGrant:
            if (msg.ids.empty()) break;  // nothing to do; the master will push later
            if (busy_) throw ProtocolViolation("worker granted a task while busy");
            busy_ = true;
            current_ = msg.ids.front();
            out.exec = current_;
            break;
        case MsgKind::BestSolution:
            best_known_ = std::min(best_known_, msg.best);
            break;
        case MsgKind::Terminate:
            terminated_ = true;
            break;
        default:
            unexpected("a worker", msg);
    }
    return out;
}

StepOutput WorkerActor::on_exec_complete(const ExecOutcome& outcome) {
    StepOutput out;
    busy_ = false;
    stats_ += outcome.result.stats;
    if (!outcome.result.best.empty() && outcome.result.value < found_value_) {
        found_value_ = outcome.result.value;
        found_perm_ = outcome.result.best;
    }
    // Announce only strict improvements over everything this worker knows;
    // the solve may have rediscovered a value that arrived mid-run.
    if (outcome.result.value < best_known_) {
        best_known_ = outcome.result.value;
        out.messages.push_back(Message::solution(self_, master_, best_known_));
    }
    out.messages.push_back(
        Message::ask_with_completion(self_, master_, 1, outcome.id, outcome.cost));
    return out;
}

// ---------------------------------------------------------------- master --

LoadSnapshot MasterActor::snapshot() const {
    LoadSnapshot s;
    s.pending = pending_.size();
    s.done = done_;
    s.total_exec = total_exec_;
    s.idle_workers = starving_.size();
    return s;
}

Message MasterActor::make_report() const {
    return Message::report(self_, kSupervisorId, snapshot());
}

void MasterActor::grant_to(ActorId worker, StepOutput& out) {
    u128 id = *pending_.begin();
    pending_.erase(pending_.begin());
    running_[worker] = id;
    out.messages.push_back(Message::grant(self_, worker, id));
}

void MasterActor::absorb_ids(const std::vector<u128>& ids, StepOutput& out) {
    pending_.insert(ids.begin(), ids.end());
    while (!starving_.empty() && !pending_.empty()) {
        ActorId worker = starving_.front();
        starving_.pop_front();
        grant_to(worker, out);
    }
}

StepOutput MasterActor::handle_worker_ask(const Message& msg) {
    StepOutput out;
    if (msg.has_completion) {
        ++done_;
        total_exec_ += msg.exec_time;
        running_.erase(msg.src);
    }
    if (!pending_.empty()) {
        grant_to(msg.src, out);
        return out;
    }
    out.messages.push_back(Message::no_tasks(self_, msg.src));
    if (std::find(starving_.begin(), starving_.end(), msg.src) == starving_.end())
        starving_.push_back(msg.src);
    // A dry pool with hungry workers is the load-balancing signal; it also
    // carries the final completion counts when this master runs out last.
    out.messages.push_back(make_report());
    return out;
}

StepOutput MasterActor::handle_supervisor_pull(const Message& msg) {
    StepOutput out;
    std::size_t count =
        std::min<std::size_t>(static_cast<std::size_t>(msg.ask_count), pending_.size());
    if (count == 0) {
        // Decline: an empty batch closes the supervisor's pull without work.
        out.messages.push_back(Message::batch(self_, kSupervisorId, {}));
        return out;
    }
    // Surrender from the head of the queue: the ids this master would have
    // granted next. The recipient picks up exactly where the donor would
    // have continued, so moving work never reorders the bound-driven sweep.
    // (Queues hold a single decomposition depth, so id order is the only
    // meaningful order within them.)
    std::vector<u128> surrendered;
    surrendered.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        surrendered.push_back(*pending_.begin());
        pending_.erase(pending_.begin());
    }
    if (transfer_ == Transfer::OneInOne) {
        for (u128 id : surrendered)
            out.messages.push_back(Message::single(self_, kSupervisorId, id));
    } else {
        out.messages.push_back(Message::batch(self_, kSupervisorId, std::move(surrendered)));
    }
    return out;
}

StepOutput MasterActor::on_message(const Message& msg) {
    StepOutput out;
    if (terminated_) return out;
    switch (msg.kind) {
        case MsgKind::AskForTasks:
            return msg.src == kSupervisorId ? handle_supervisor_pull(msg)
                                            : handle_worker_ask(msg);
        case MsgKind::ReallocateSingle:
        case MsgKind::ReallocateBatch:
            absorb_ids(msg.ids, out);
            break;
        case MsgKind::UpdateSolutionRequest:
            out.messages.push_back(Message::solution(self_, kSupervisorId, best_known_));
            out.messages.push_back(make_report());
            break;
        case MsgKind::BestSolution:
            if (msg.best < best_known_) {
                best_known_ = msg.best;
                if (msg.src != kSupervisorId)
                    out.messages.push_back(
                        Message::solution(self_, kSupervisorId, best_known_));
                for (ActorId w : workers_)
                    if (w != msg.src)
                        out.messages.push_back(Message::solution(self_, w, best_known_));
            }
            break;
        case MsgKind::Terminate:
            terminated_ = true;
            for (ActorId w : workers_)
                out.messages.push_back(Message::terminate(self_, w));
            break;
        default:
            unexpected("a master", msg);
    }
    return out;
}

// ------------------------------------------------------------ supervisor --

SupervisorActor::SupervisorActor(SupervisorConfig cfg)
    : cfg_(std::move(cfg)), rng_(derive_seed(cfg_.seed, /*stream=*/3, 0)),
      best_known_(cfg_.initial_best) {
    if (cfg_.masters.empty()) throw std::invalid_argument("need at least one master");
    if (cfg_.masters.size() != cfg_.workers_per_master.size())
        throw std::invalid_argument("one worker count per master required");
    view_.resize(cfg_.masters.size());
    for (std::size_t i = 0; i < view_.size(); ++i) {
        view_[i].master_id = cfg_.masters[i];
        view_[i].n_workers = cfg_.workers_per_master[i];
    }
    view_idle_.assign(view_.size(), 0);
    pull_outstanding_.assign(view_.size(), 0);
    total_ = cfg_.initial_ids.size();
}

std::size_t SupervisorActor::index_of(ActorId master) const {
    for (std::size_t i = 0; i < cfg_.masters.size(); ++i)
        if (cfg_.masters[i] == master) return i;
    throw ProtocolViolation("message from an unknown master " + std::to_string(master));
}

void SupervisorActor::send_ids(std::size_t master_index, const std::vector<u128>& ids,
                               StepOutput& out) {
    if (ids.empty()) return;
    ActorId dst = cfg_.masters[master_index];
    if (cfg_.transfer == Transfer::OneInOne) {
        for (u128 id : ids) out.messages.push_back(Message::single(kSupervisorId, dst, id));
    } else {
        // Respect the frame's 16-bit length field: huge runs go out in
        // several batches.
        const std::size_t width = WireFormat::for_jobs(cfg_.n_jobs).width;
        const std::size_t max_ids = 0xffff / width - 1;
        for (std::size_t at = 0; at < ids.size(); at += max_ids) {
            std::size_t end = std::min(ids.size(), at + max_ids);
            out.messages.push_back(Message::batch(
                kSupervisorId, dst, std::vector<u128>(ids.begin() + at, ids.begin() + end)));
        }
    }
    view_[master_index].pending += ids.size();
}

StepOutput SupervisorActor::on_start() {
    StepOutput out;
    const std::size_t m = view_.size();
    std::vector<std::vector<u128>> parts(m);
    switch (cfg_.strategy) {
        case Strategy::Rand: {
            // Every placement decision is a fresh uniform pick.
            for (u128 id : cfg_.initial_ids)
                parts[static_cast<std::size_t>(
                          rand_select(rng_, static_cast<int>(m)))].push_back(id);
            break;
        }
        case Strategy::Pfs: {
            // Nothing is measured yet, so the plan falls back to worker
            // counts; going through the planner keeps one code path.
            std::vector<std::uint64_t> counts =
                pfs_allocate(total_, view_, cfg_.pfs_weight);
            std::size_t at = 0;
            for (std::size_t i = 0; i < m; ++i) {
                parts[i].assign(cfg_.initial_ids.begin() + static_cast<std::ptrdiff_t>(at),
                                cfg_.initial_ids.begin() +
                                    static_cast<std::ptrdiff_t>(at + counts[i]));
                at += counts[i];
            }
            break;
        }
        case Strategy::Sld:
        case Strategy::Acwn:
            parts = sld_partition(cfg_.initial_ids, cfg_.workers_per_master);
            break;
    }
    for (std::size_t i = 0; i < m; ++i) send_ids(i, parts[i], out);
    return out;
}

void SupervisorActor::remedy(std::size_t starving, StepOutput& out) {
    if (cfg_.strategy == Strategy::Sld) return;  // static split, by definition
    // Donor: the most loaded master we are not already pulling from.
    std::size_t donor = view_.size();
    for (std::size_t i = 0; i < view_.size(); ++i) {
        if (i == starving || pull_outstanding_[i] || view_[i].pending == 0) continue;
        if (donor == view_.size() || view_[i].pending > view_[donor].pending) donor = i;
    }
    if (donor == view_.size()) return;  // nobody has spare work we can reach
    // Batched pulls are sized by demand: two per idle worker at the starving
    // master, never more than half the donor's visible queue. Oversized
    // batches would just re-starve the donor or swamp a slow recipient.
    std::uint64_t count = 1;
    if (cfg_.transfer == Transfer::MultiInOne) {
        std::uint64_t want = 2 * std::max<std::uint64_t>(1, view_idle_[starving]);
        count = std::max<std::uint64_t>(1, std::min(want, view_[donor].pending / 2));
    }
    pull_outstanding_[donor] = 1;
    out.messages.push_back(
        Message::ask(kSupervisorId, cfg_.masters[donor], count));
}

std::size_t SupervisorActor::pick_recipient(std::size_t exclude, std::uint64_t arriving) {
    const std::size_t m = view_.size();
    switch (cfg_.strategy) {
        case Strategy::Rand: {
            // Uniform over every master but the donor.
            int pick = rand_select(rng_, static_cast<int>(m - 1));
            std::size_t idx = static_cast<std::size_t>(pick);
            return idx >= exclude ? idx + 1 : idx;
        }
        case Strategy::Acwn: {
            std::size_t best = m;
            for (std::size_t i = 0; i < m; ++i) {
                if (i == exclude) continue;
                if (best == m || view_[i].pending < view_[best].pending) best = i;
            }
            return best;
        }
        case Strategy::Pfs: {
            // Place where the proportional plan sees the biggest shortfall.
            std::uint64_t queued = arriving;
            for (const MasterStats& s : view_) queued += s.pending;
            std::vector<std::uint64_t> plan = pfs_allocate(queued, view_, cfg_.pfs_weight);
            std::size_t best = m;
            std::int64_t best_deficit = 0;
            for (std::size_t i = 0; i < m; ++i) {
                if (i == exclude) continue;
                std::int64_t deficit = static_cast<std::int64_t>(plan[i]) -
                                       static_cast<std::int64_t>(view_[i].pending);
                if (best == m || deficit > best_deficit) {
                    best = i;
                    best_deficit = deficit;
                }
            }
            return best;
        }
        case Strategy::Sld:
            break;
    }
    throw ProtocolViolation("the static strategy never moves work");
}

void SupervisorActor::check_termination(StepOutput& out) {
    std::uint64_t done = 0;
    for (const MasterStats& s : view_) done += s.completed;
    if (done < total_) return;
    finished_ = true;
    for (ActorId master : cfg_.masters)
        out.messages.push_back(Message::terminate(kSupervisorId, master));
}

StepOutput SupervisorActor::on_tick() {
    StepOutput out;
    if (finished_) return out;
    for (ActorId master : cfg_.masters)
        out.messages.push_back(Message::poll(kSupervisorId, master));
    // Sweep for masters the event path missed (stale views, dry donors).
    for (std::size_t i = 0; i < view_.size(); ++i)
        if (view_idle_[i] > 0 && view_[i].pending == 0) remedy(i, out);
    return out;
}

StepOutput SupervisorActor::on_message(const Message& msg) {
    StepOutput out;
    if (finished_) return out;
    switch (msg.kind) {
        case MsgKind::LoadReport: {
            std::size_t i = index_of(msg.src);
            view_[i].pending = msg.load.pending;
            view_[i].completed = msg.load.done;
            view_[i].total_exec_time = msg.load.total_exec;
            view_idle_[i] = msg.load.idle_workers;
            check_termination(out);
            if (!finished_ && view_idle_[i] > 0 && view_[i].pending == 0) remedy(i, out);
            break;
        }
        case MsgKind::BestSolution:
            if (msg.best < best_known_) {
                best_known_ = msg.best;
                for (ActorId master : cfg_.masters)
                    if (master != msg.src)
                        out.messages.push_back(
                            Message::solution(kSupervisorId, master, best_known_));
            }
            break;
        case MsgKind::ReallocateSingle:
        case MsgKind::ReallocateBatch: {
            std::size_t donor = index_of(msg.src);
            pull_outstanding_[donor] = 0;
            std::uint64_t c = msg.ids.size();
            if (c == 0) {
                view_[donor].pending = 0;  // the donor told us it is dry
                break;
            }
            view_[donor].pending -= std::min(view_[donor].pending, c);
            std::size_t recipient = pick_recipient(donor, c);
            send_ids(recipient, msg.ids, out);
            break;
        }
        default:
            unexpected("the supervisor", msg);
    }
    return out;
}

}  // namespace flowbb

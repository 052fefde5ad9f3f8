#include "flowbb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <type_traits>

namespace flowbb {

std::string csv_row(const RunRecord& r) {
    std::ostringstream out;
    out << r.instance << ',' << to_string(r.strategy) << ',' << to_string(r.transfer) << ','
        << r.seed << ',' << r.time << ',';
    if (r.makespan < kNoIncumbent) out << r.makespan;
    out << ',' << (r.optimal ? 1 : 0) << ',' << r.nodes << ',' << r.messages << ','
        << r.bytes << ',' << r.status;
    return out.str();
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    out << kCsvHeader << '\n';
    for (const RunRecord& r : records) out << csv_row(r) << '\n';
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <typename T>
T parse_number(const std::string& value, int line) {
    try {
        if constexpr (std::is_floating_point_v<T>) {
            return static_cast<T>(std::stod(value));
        } else if constexpr (std::is_signed_v<T>) {
            return static_cast<T>(std::stoll(value));
        } else {
            return static_cast<T>(std::stoull(value));
        }
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + value + "'", line);
    }
}

}  // namespace

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    int line_no = 0;
    bool saw_instances = false, saw_strategies = false, saw_transfers = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key = value, got '" + line + "'", line_no);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("empty key or value in '" + line + "'", line_no);
        try {
            if (key == "instance") {
                if (!saw_instances) cfg.instance_files.clear();
                saw_instances = true;
                for (const std::string& f : split_list(value)) cfg.instance_files.push_back(f);
            } else if (key == "strategy") {
                if (!saw_strategies) cfg.strategies.clear();
                saw_strategies = true;
                for (const std::string& s : split_list(value))
                    cfg.strategies.push_back(parse_strategy(s));
            } else if (key == "transfer") {
                if (!saw_transfers) cfg.transfers.clear();
                saw_transfers = true;
                for (const std::string& t : split_list(value))
                    cfg.transfers.push_back(parse_transfer(t));
            } else if (key == "replicates") {
                cfg.replicates = parse_number<int>(value, line_no);
            } else if (key == "seed") {
                cfg.seed = parse_number<std::uint64_t>(value, line_no);
            } else if (key == "jobs") {
                cfg.jobs = parse_number<int>(value, line_no);
            } else if (key == "out") {
                cfg.out_path = value;
            } else if (key == "trace") {
                cfg.trace_path = value;
            } else if (key == "random-instances") {
                cfg.random_instances = parse_number<int>(value, line_no);
            } else if (key == "random-n") {
                cfg.random_n = parse_number<int>(value, line_no);
            } else if (key == "random-m") {
                cfg.random_m = parse_number<int>(value, line_no);
            } else if (key == "random-mean") {
                cfg.random_mean = parse_number<double>(value, line_no);
            } else if (key == "random-sd") {
                cfg.random_sd = parse_number<double>(value, line_no);
            } else if (key == "k-split") {
                cfg.base.k_split = parse_number<int>(value, line_no);
            } else if (key == "topology") {
                cfg.base.topology = parse_topology(value);
            } else if (key == "het") {
                cfg.base.het = parse_het(value);
            } else if (key == "mode") {
                cfg.base.mode = parse_mode(value);
            } else if (key == "budget") {
                cfg.base.node_budget = parse_number<std::uint64_t>(value, line_no);
            } else if (key == "latency") {
                cfg.base.link_latency = parse_number<Time>(value, line_no);
            } else if (key == "sync-interval") {
                cfg.base.topology.sync_interval = parse_number<Time>(value, line_no);
            } else if (key == "pfs-weight") {
                cfg.base.pfs_weight = parse_pfs_weight(value);
            } else if (key == "bound") {
                cfg.base.bound = parse_bound_kind(value);
            } else if (key == "max-particles") {
                cfg.base.max_particles = parse_number<std::size_t>(value, line_no);
            } else {
                throw ParseError("unknown config key '" + key + "'", line_no);
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(e.what(), line_no);
        }
    }
}

std::vector<Instance> collect_instances(const ExperimentConfig& cfg) {
    std::vector<Instance> roster;
    for (const std::string& path : cfg.instance_files) {
        std::vector<Instance> parsed = load_taillard_file(path);
        for (Instance& inst : parsed) roster.push_back(std::move(inst));
    }
    for (int i = 0; i < cfg.random_instances; ++i)
        roster.push_back(generate_random(cfg.random_n, cfg.random_m, cfg.random_mean,
                                         cfg.random_sd, derive_seed(cfg.seed, 1, i)));
    if (roster.empty())
        throw std::invalid_argument(
            "no instances: give --instance files or --random-instances > 0");
    return roster;
}

std::uint64_t run_seed_for(std::uint64_t root, std::size_t instance_idx, int replicate) {
    return derive_seed(derive_seed(root, 2, instance_idx), 5,
                       static_cast<std::uint64_t>(replicate));
}

namespace {

RunRecord record_from(const Instance& inst, const RunConfig& rc, const RunMetrics& m) {
    RunRecord r;
    r.instance = inst.name.empty() ? (std::to_string(inst.jobs) + "x" +
                                      std::to_string(inst.machines))
                                   : inst.name;
    r.strategy = rc.strategy;
    r.transfer = rc.transfer;
    r.seed = rc.seed;
    r.time = m.completion_time;
    r.makespan = m.makespan;
    r.optimal = m.complete;
    r.nodes = m.search.nodes_expanded + m.search.leaves_evaluated;
    r.messages = m.messages;
    r.bytes = m.bytes;
    r.status = m.complete ? "optimal" : "truncated";
    return r;
}

struct CellKey {
    Strategy s;
    Transfer t;
    bool operator<(const CellKey& o) const {
        if (s != o.s) return static_cast<int>(s) < static_cast<int>(o.s);
        return static_cast<int>(t) < static_cast<int>(o.t);
    }
};

void print_summary(std::ostream& out, const std::vector<RunRecord>& records) {
    std::map<CellKey, std::pair<double, std::uint64_t>> sums;  // time sum, count
    std::map<CellKey, double> msg_sums, byte_sums;
    for (const RunRecord& r : records) {
        CellKey key{r.strategy, r.transfer};
        sums[key].first += static_cast<double>(r.time);
        sums[key].second += 1;
        msg_sums[key] += static_cast<double>(r.messages);
        byte_sums[key] += static_cast<double>(r.bytes);
    }
    auto mean_time = [&](CellKey k) -> double {
        auto it = sums.find(k);
        return it == sums.end() || it->second.second == 0
                   ? -1.0
                   : it->second.first / static_cast<double>(it->second.second);
    };

    out << "cell means over " << records.size() << " runs\n";
    out << std::left << std::setw(10) << "strategy" << std::setw(10) << "transfer"
        << std::right << std::setw(14) << "time" << std::setw(14) << "messages"
        << std::setw(14) << "bytes" << '\n';
    for (const auto& [key, acc] : sums) {
        double cnt = static_cast<double>(acc.second);
        out << std::left << std::setw(10) << to_string(key.s) << std::setw(10)
            << to_string(key.t) << std::right << std::fixed << std::setprecision(1)
            << std::setw(14) << acc.first / cnt << std::setw(14) << msg_sums[key] / cnt
            << std::setw(14) << byte_sums[key] / cnt << '\n';
    }
    out.unsetf(std::ios::fixed);

    // Relative improvements: each dynamic strategy against the static split
    // on the same transfer scheme, and the batch scheme against one-at-a-time
    // within each strategy. Positive = the candidate finished sooner.
    auto improvement = [](double baseline, double candidate) {
        return (baseline - candidate) / baseline * 100.0;
    };
    out << "time improvements\n";
    for (Transfer t : {Transfer::OneInOne, Transfer::MultiInOne}) {
        double base = mean_time({Strategy::Sld, t});
        if (base <= 0) continue;
        for (Strategy s : {Strategy::Rand, Strategy::Acwn, Strategy::Pfs}) {
            double cand = mean_time({s, t});
            if (cand < 0) continue;
            out << "  " << to_string(s) << "/" << to_string(t) << " vs sld/" << to_string(t)
                << ": " << std::fixed << std::setprecision(1) << improvement(base, cand)
                << "%\n";
        }
    }
    for (Strategy s : {Strategy::Sld, Strategy::Rand, Strategy::Acwn, Strategy::Pfs}) {
        double one = mean_time({s, Transfer::OneInOne});
        double batch = mean_time({s, Transfer::MultiInOne});
        if (one <= 0 || batch < 0) continue;
        out << "  " << to_string(s) << ": min1 vs 1in1: " << std::fixed
            << std::setprecision(1) << improvement(one, batch) << "%\n";
    }
    out.unsetf(std::ios::fixed);
}

}  // namespace

int cmd_compare(const ExperimentConfig& cfg, std::ostream& summary) {
    if (cfg.replicates < 1) throw std::invalid_argument("replicates must be at least 1");
    if (cfg.strategies.empty() || cfg.transfers.empty())
        throw std::invalid_argument("need at least one strategy and one transfer scheme");
    std::vector<Instance> roster = collect_instances(cfg);

    struct Cell {
        std::size_t instance_idx;
        Strategy strategy;
        Transfer transfer;
        int replicate;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < roster.size(); ++i)
        for (Strategy s : cfg.strategies)
            for (Transfer t : cfg.transfers)
                for (int rep = 0; rep < cfg.replicates; ++rep)
                    cells.push_back({i, s, t, rep});

    std::vector<RunRecord> records(cells.size());
    std::vector<std::string> errors(cells.size());
    auto run_cell = [&](std::size_t idx) {
        const Cell& cell = cells[idx];
        RunConfig rc = cfg.base;
        rc.strategy = cell.strategy;
        rc.transfer = cell.transfer;
        rc.seed = run_seed_for(cfg.seed, cell.instance_idx, cell.replicate);
        rc.record_trace = false;
        try {
            RunMetrics m = run_experiment(roster[cell.instance_idx], rc);
            records[idx] = record_from(roster[cell.instance_idx], rc, m);
        } catch (const std::exception& e) {
            errors[idx] = e.what();
        }
    };

    // Simulated cells are independent; real-thread runs keep the machine to
    // themselves so their timings mean something.
    int jobs = cfg.base.mode == RunMode::Sim ? std::max(1, cfg.jobs) : 1;
    if (jobs == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cells.size();
                     i = next.fetch_add(1))
                    run_cell(i);
            });
        for (std::thread& t : pool) t.join();
    }
    for (const std::string& err : errors)
        if (!err.empty()) throw ProtocolViolation(err);

    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        if (!out) throw std::runtime_error("cannot write CSV to " + cfg.out_path);
        write_csv(out, records);
    }
    print_summary(summary, records);

    bool all_optimal = std::all_of(records.begin(), records.end(),
                                   [](const RunRecord& r) { return r.optimal; });
    return all_optimal ? 0 : 2;
}

int cmd_solve(const ExperimentConfig& cfg, std::ostream& out) {
    std::vector<Instance> roster = collect_instances(cfg);
    const Instance& inst = roster.front();
    RunConfig rc = cfg.base;
    rc.strategy = cfg.strategies.front();
    rc.transfer = cfg.transfers.front();
    rc.seed = run_seed_for(cfg.seed, 0, 0);
    rc.record_trace = !cfg.trace_path.empty();

    RunMetrics m = run_experiment(inst, rc);

    out << "instance   : " << inst.name << " (" << inst.jobs << " jobs x " << inst.machines
        << " machines)\n";
    out << "setup      : " << to_string(rc.strategy) << " strategy, " << to_string(rc.transfer)
        << " transfer, " << cfg.base.topology.n_masters() << " masters / "
        << cfg.base.topology.n_workers() << " workers, "
        << (rc.mode == RunMode::Sim ? "simulated" : "threaded") << "\n";
    out << "time       : " << m.completion_time
        << (rc.mode == RunMode::Sim ? " units" : " ms") << " (drained at " << m.drain_time
        << ")\n";
    if (m.makespan < kNoIncumbent) {
        out << "makespan   : " << m.makespan << (m.complete ? " (proven optimal)" : " (best found)")
            << "\n";
    } else {
        out << "makespan   : none found within budget\n";
    }
    if (!m.best.empty()) {
        out << "schedule   :";
        for (int j : m.best) out << ' ' << j;
        out << '\n';
    }
    out << "search     : " << m.search.nodes_expanded << " nodes, "
        << m.search.leaves_evaluated << " leaves, " << m.search.nodes_pruned << " pruned\n";
    out << "particles  : " << m.particles_done << "/" << m.particles_total << "\n";
    out << "traffic    : " << m.messages << " messages, " << m.bytes << " bytes\n";
    out << "status     : " << (m.complete ? "optimal" : "truncated") << "\n";

    if (!cfg.trace_path.empty()) {
        std::ofstream tf(cfg.trace_path);
        if (!tf) throw std::runtime_error("cannot write trace to " + cfg.trace_path);
        for (const TraceEvent& ev : m.trace) tf << format_trace_line(ev) << '\n';
    }
    if (!cfg.out_path.empty()) {
        std::ofstream cf(cfg.out_path);
        if (!cf) throw std::runtime_error("cannot write CSV to " + cfg.out_path);
        write_csv(cf, {record_from(inst, rc, m)});
    }
    return m.complete ? 0 : 2;
}

int cmd_gen(const GenSpec& req, std::ostream& diag) {
    if (req.count < 1) throw std::invalid_argument("count must be at least 1");
    if (req.out_path.empty()) throw std::invalid_argument("gen needs an output path");
    std::ofstream out(req.out_path);
    if (!out) throw std::runtime_error("cannot write to " + req.out_path);
    for (int i = 0; i < req.count; ++i) {
        Instance inst = generate_random(req.n, req.m, req.mean, req.sd,
                                        derive_seed(req.seed, 1, i));
        write_taillard(out, inst);
    }
    diag << "wrote " << req.count << " instance(s) (" << req.n << "x" << req.m << ") to "
         << req.out_path << "\n";
    return 0;
}

}  // namespace flowbb

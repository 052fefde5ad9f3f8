#include "flowbb/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace flowbb {

Strategy parse_strategy(const std::string& token) {
    if (token == "sld") return Strategy::Sld;
    if (token == "rand") return Strategy::Rand;
    if (token == "acwn") return Strategy::Acwn;
    if (token == "pfs") return Strategy::Pfs;
    throw std::invalid_argument("unknown strategy: " + token);
}

Transfer parse_transfer(const std::string& token) {
    if (token == "1in1") return Transfer::OneInOne;
    if (token == "min1") return Transfer::MultiInOne;
    throw std::invalid_argument("unknown transfer scheme: " + token);
}

PfsWeight parse_pfs_weight(const std::string& token) {
    if (token == "literal") return PfsWeight::Literal;
    if (token == "rate") return PfsWeight::Rate;
    throw std::invalid_argument("unknown weight mode: " + token);
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Sld: return "sld";
        case Strategy::Rand: return "rand";
        case Strategy::Acwn: return "acwn";
        case Strategy::Pfs: return "pfs";
    }
    return "?";
}

std::string to_string(Transfer t) {
    return t == Transfer::OneInOne ? "1in1" : "min1";
}

std::string to_string(PfsWeight w) {
    return w == PfsWeight::Literal ? "literal" : "rate";
}

std::vector<std::uint64_t> proportional_counts(std::uint64_t total,
                                               const std::vector<double>& weights) {
    if (weights.empty()) throw std::invalid_argument("need at least one weight");
    for (double w : weights)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("weights must be finite and non-negative");

    std::vector<double> w = weights;
    double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (sum <= 0.0) {
        std::fill(w.begin(), w.end(), 1.0);
        sum = static_cast<double>(w.size());
    }

    // Quotas use the product-first form so that, for integer-valued weights
    // of sane magnitude, the remainder numerators total*w - share*sum come
    // out as exact integers and ties sort identically to exact arithmetic.
    const std::size_t n = w.size();
    std::vector<std::uint64_t> shares(n, 0);
    std::vector<double> remainder(n, 0.0);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double scaled = static_cast<double>(total) * w[i];
        double base = std::floor(scaled / sum);
        shares[i] = static_cast<std::uint64_t>(base);
        remainder[i] = scaled - base * sum;  // remainder, scaled by `sum`
        assigned += shares[i];
    }
    // Floors can only undershoot; hand the leftover units to the largest
    // remainders, lower index first on ties.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainder[a] > remainder[b];
    });
    for (std::size_t i = 0; assigned < total; ++i) {
        ++shares[order[i % n]];
        ++assigned;
    }
    return shares;
}

std::vector<std::uint64_t> pfs_allocate(std::uint64_t total,
                                        const std::vector<MasterStats>& stats,
                                        PfsWeight weight) {
    if (stats.empty()) throw std::invalid_argument("need at least one master");
    bool cold = std::any_of(stats.begin(), stats.end(),
                            [](const MasterStats& s) { return s.completed == 0; });
    std::vector<double> w;
    w.reserve(stats.size());
    for (const MasterStats& s : stats) {
        if (cold) {
            w.push_back(static_cast<double>(s.n_workers));
            continue;
        }
        double avg = static_cast<double>(std::max<Time>(1, s.avg_exec_time()));
        double workers = static_cast<double>(s.n_workers);
        w.push_back(weight == PfsWeight::Literal ? avg * workers : workers / avg);
    }
    return proportional_counts(total, w);
}

int acwn_select(const std::vector<MasterStats>& stats) {
    if (stats.empty()) throw std::invalid_argument("need at least one master");
    std::size_t best = 0;
    for (std::size_t i = 1; i < stats.size(); ++i) {
        if (stats[i].pending < stats[best].pending ||
            (stats[i].pending == stats[best].pending &&
             stats[i].master_id < stats[best].master_id))
            best = i;
    }
    return stats[best].master_id;
}

int rand_select(std::mt19937_64& rng, int n_masters) {
    if (n_masters < 1) throw std::invalid_argument("need at least one master");
    const std::uint64_t n = static_cast<std::uint64_t>(n_masters);
    // Rejection sampling keeps the draw exactly uniform for any n.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<int>(x % n);
}

std::vector<std::vector<u128>> sld_partition(const std::vector<u128>& ids,
                                             const std::vector<std::size_t>& worker_counts) {
    std::vector<double> weights(worker_counts.begin(), worker_counts.end());
    std::vector<std::uint64_t> counts = proportional_counts(ids.size(), weights);
    std::vector<std::vector<u128>> parts(worker_counts.size());
    std::size_t at = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        parts[i].assign(ids.begin() + static_cast<std::ptrdiff_t>(at),
                        ids.begin() + static_cast<std::ptrdiff_t>(at + counts[i]));
        at += counts[i];
    }
    return parts;
}

}  // namespace flowbb

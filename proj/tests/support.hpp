#pragma once

// Independent reference implementations for the test suite. These are
// deliberately written differently from the production code (full DP table
// instead of a rolling front, rational comparison instead of floating
// remainders) so that agreement actually means something.

#include <cstdint>
#include <random>
#include <vector>

#include "flowbb/flowshop.hpp"

namespace testsupport {

// Makespan via the full completion-time table.
inline flowbb::Time oracle_makespan(const flowbb::Instance& inst,
                                    const flowbb::Permutation& perm) {
    const int n = static_cast<int>(perm.size());
    const int m = inst.machines;
    std::vector<std::vector<flowbb::Time>> c(n, std::vector<flowbb::Time>(m, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            flowbb::Time up = i > 0 ? c[i - 1][j] : 0;
            flowbb::Time left = j > 0 ? c[i][j - 1] : 0;
            c[i][j] = std::max(up, left) + inst.p(perm[i], j);
        }
    }
    return c[n - 1][m - 1];
}

// Small random instances for property tests; plain modulo draws are fine
// here because nothing depends on their exact distribution.
inline flowbb::Instance random_instance(std::mt19937_64& rng, int n, int m,
                                        flowbb::Time lo = 1, flowbb::Time hi = 30) {
    std::vector<flowbb::Time> proc(static_cast<std::size_t>(n) * m);
    for (flowbb::Time& t : proc)
        t = lo + static_cast<flowbb::Time>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    return flowbb::Instance(n, m, std::move(proc));
}

// Largest-remainder apportionment checked with exact integer cross products:
// share i gets floor(total * w_i / W) plus possibly one unit, units going to
// the largest remainders total*w_i mod W (ties to the lower index). Weights
// here are integers so the comparison is exact.
inline std::vector<std::uint64_t> oracle_apportion(std::uint64_t total,
                                                   const std::vector<std::uint64_t>& weights) {
    using u128 = unsigned __int128;
    u128 w_sum = 0;
    for (std::uint64_t w : weights) w_sum += w;
    const std::size_t k = weights.size();
    std::vector<std::uint64_t> shares(k);
    std::vector<u128> rem(k);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < k; ++i) {
        u128 product = static_cast<u128>(total) * weights[i];
        shares[i] = static_cast<std::uint64_t>(product / w_sum);
        rem[i] = product % w_sum;
        assigned += shares[i];
    }
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++shares[order[i]];
    return shares;
}

}  // namespace testsupport

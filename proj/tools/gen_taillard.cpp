// Regenerates the bundled 20x20 benchmark files from their published time
// seeds. The instances themselves are pinned by the classic linear
// congruential recipe (including its single-precision division), so the
// matrices match the widely circulated benchmark set bit for bit; the
// header's bound fields are computed here: the upper bound is the identity
// schedule's makespan, the lower bound is the root relaxation.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <vector>

#include "flowbb/flowshop.hpp"
#include "flowbb/taillard.hpp"

namespace {

struct Bench {
    const char* name;
    long time_seed;
};

// The ten published seeds for the 20-job, 20-machine group.
const Bench kBenches[] = {
    {"ta021", 479340445},  {"ta022", 268827376},  {"ta023", 1958948863},
    {"ta024", 918272953},  {"ta025", 555010963},  {"ta026", 2010851491},
    {"ta027", 1519833303}, {"ta028", 1748670931}, {"ta029", 1923497586},
    {"ta030", 1829909967},
};

long unif(long* seed, long low, long high) {
    long m = 2147483647, a = 16807, b = 127773, c = 2836, k;
    double value_0_1;

    k = (*seed) / b;
    *seed = a * (*seed % b) - k * c;
    if (*seed < 0) *seed += m;
    value_0_1 = float(*seed) / float(m);  // single precision, as published
    return low + long(value_0_1 * (high - low + 1));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string out_dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(out_dir);

    const int n = 20, m = 20;
    for (const Bench& bench : kBenches) {
        long seed = bench.time_seed;
        std::vector<flowbb::Time> proc(static_cast<std::size_t>(n) * m);
        // Draw order is machine-major: all jobs on machine 0, then machine 1...
        for (int machine = 0; machine < m; ++machine)
            for (int job = 0; job < n; ++job)
                proc[static_cast<std::size_t>(job) * m + machine] = unif(&seed, 1, 99);

        flowbb::Instance inst(n, m, std::move(proc), bench.name);
        inst.file_seed = bench.time_seed;

        flowbb::Permutation identity(n);
        std::iota(identity.begin(), identity.end(), 0);
        inst.upper_bound = flowbb::makespan(inst, identity);
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        flowbb::CompletionFront root = flowbb::empty_front(inst);
        inst.lower_bound = flowbb::lower_bound(inst, root, all);

        std::string path = out_dir + "/" + bench.name + ".txt";
        std::ofstream out(path);
        if (!out) {
            std::cerr << "cannot write " << path << '\n';
            return 1;
        }
        flowbb::write_taillard(out, inst);
        std::cout << path << ": ub=" << *inst.upper_bound << " lb=" << *inst.lower_bound
                  << '\n';
    }
    return 0;
}

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace flowbb {

// Processing/completion times are dimensionless integer units.
using Time = std::int64_t;

// Sentinel for "no incumbent yet". Kept well below INT64_MAX so that
// bound arithmetic (front + sums of processing times) can never wrap.
inline constexpr Time kNoIncumbent = std::numeric_limits<Time>::max() / 4;

// Tree node IDs need at least 128 bits: the ID space for n jobs is
// sum_{i=1..n} n!/(n-i)!, which exceeds 64 bits beyond n = 20.
using u128 = unsigned __int128;

std::string to_string(u128 v);

// Thrown when a request exceeds a hard size limit (ID range, particle
// cap, wire field width) rather than a soft precondition.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse failure with the 1-based line number where it was detected.
struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& what, int line_no)
        : std::runtime_error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

// An actor received a message it cannot legally handle, or the event
// loop drained with particles still outstanding.
struct ProtocolViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// splitmix64: the fan-out function for deriving per-cell seeds from a
// root seed. Fixed algorithm so derived seeds are stable across builds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(root + 0x9e3779b97f4a7c15ULL * stream) + index);
}

}  // namespace flowbb

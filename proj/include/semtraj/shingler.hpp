#pragma once
// K-sequential shingling of type-code sequences: the distinct ordered
// k-subsequences of a trajectory's type-level view, which become the hash
// keys the partitioner groups on.

#include "semtraj/model.hpp"

#include <compare>

namespace semtraj {

// An ordered k-tuple of type codes taken at increasing positions (contiguous
// or not) of a trajectory.
struct Shingle {
    std::vector<Code> codes;

    auto operator<=>(const Shingle&) const = default;
};

struct ShingleHash {
    std::size_t operator()(const Shingle& s) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (Code c : s.codes) {
            h ^= static_cast<std::uint32_t>(c);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

// A trajectory's distinct shingles, sorted. m = shingles.size() is bounded
// by C(L', k) where L' counts the usable (known-type) positions.
struct ShingleSet {
    TrajectoryId id = 0;
    std::vector<Shingle> shingles;
};

// All distinct ordered k-subsequences of `types`. Positions holding
// kUnknownCode are dropped before enumeration, so unknown places never
// create candidate pairs. Fewer than k usable positions yields an empty set.
// The enumeration is the straightforward C(L, k) combination walk; inputs
// here are short visiting sequences, not documents.
std::vector<Shingle> k_shingles(std::span<const Code> types, int k);

inline ShingleSet shingle_trajectory(const EncodedTrajectory& et, int k) {
    return ShingleSet{et.id(), k_shingles(et.type_keys(), k)};
}

// Expected probability that a length-L sequence over a Q-symbol alphabet
// lands in a specific shingle bucket: C(L, k) / Q^k. Accepts fractional L
// (an average length); returns 0 when L < k.
double expected_collision_rate(double avg_len, int k, std::uint64_t type_vocabulary);

// Packed fast path used by the pipeline when every type code fits in `bits`
// and k * bits <= 63: a whole shingle becomes one 64-bit key (codes folded
// coarse position first), so the partition stage never touches heap-backed
// shingles. Same set semantics as k_shingles, one allocation per trajectory.
inline std::uint64_t pack_shingle(std::span<const Code> codes, int bits) {
    std::uint64_t key = 0;
    for (Code c : codes)
        key = (key << bits) | static_cast<std::uint64_t>(c);
    return key;
}

std::vector<std::uint64_t> k_shingles_packed(std::span<const Code> types, int k, int bits);

} // namespace semtraj

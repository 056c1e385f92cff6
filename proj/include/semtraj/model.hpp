#pragma once
// Core domain types shared by every stage of the trajectory-similarity
// pipeline: hierarchical place encodings, the semantic forest dictionary,
// trajectories, scored pairs, communities, and the similarity config.
//
// All types are immutable after construction and safe to share across
// worker threads without locking.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace semtraj {

using TrajectoryId = std::uint64_t;

// Integer code for one hierarchy component. Codes from a forest are
// non-negative; kUnknownCode marks a place name that the forest does not
// contain. An unknown component never compares equal to anything, not even
// to another unknown.
using Code = std::int32_t;
inline constexpr Code kUnknownCode = -1;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Category drives the CLI exit code: input = 2, config = 3, resource = 4.
enum class ErrorKind { input, config, resource };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct InvalidPair : Error {
    explicit InvalidPair(const std::string& w) : Error(ErrorKind::config, w) {}
};
struct DuplicatePlace : Error {
    explicit DuplicatePlace(const std::string& w) : Error(ErrorKind::input, w) {}
};
struct MalformedForest : Error {
    explicit MalformedForest(const std::string& w) : Error(ErrorKind::input, w) {}
};
struct InvalidLevel : Error {
    explicit InvalidLevel(const std::string& w) : Error(ErrorKind::config, w) {}
};
struct InvalidK : Error {
    explicit InvalidK(const std::string& w) : Error(ErrorKind::config, w) {}
};
struct InvalidConfig : Error {
    explicit InvalidConfig(const std::string& w) : Error(ErrorKind::config, w) {}
};
struct ConfigMismatch : Error {
    explicit ConfigMismatch(const std::string& w) : Error(ErrorKind::config, w) {}
};
struct MissingTrajectory : Error {
    explicit MissingTrajectory(const std::string& w) : Error(ErrorKind::input, w) {}
};
struct EmptyResult : Error {
    explicit EmptyResult(const std::string& w) : Error(ErrorKind::input, w) {}
};
struct EmptyVocabulary : Error {
    explicit EmptyVocabulary(const std::string& w) : Error(ErrorKind::input, w) {}
};
struct UndefinedMetric : Error {
    explicit UndefinedMetric(const std::string& w) : Error(ErrorKind::input, w) {}
};
struct MalformedInput : Error {
    explicit MalformedInput(const std::string& w) : Error(ErrorKind::input, w) {}
};
struct ResourceExceeded : Error {
    explicit ResourceExceeded(const std::string& w) : Error(ErrorKind::resource, w) {}
};

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

// A place's hierarchical code path, ordered coarse to fine: component 1 is
// the type, component 2 the class, component n the name (for n = 3).
class Encoding {
public:
    Encoding() = default;
    explicit Encoding(std::vector<Code> components) : components_(std::move(components)) {}

    // The reserved encoding for a place name absent from the forest.
    static Encoding unknown(int levels) {
        return Encoding(std::vector<Code>(static_cast<std::size_t>(levels), kUnknownCode));
    }

    int levels() const { return static_cast<int>(components_.size()); }
    std::span<const Code> components() const { return components_; }

    // 1-based component access.
    Code component(int level) const { return components_.at(static_cast<std::size_t>(level) - 1); }

    // First h components; prefix(h) equality is the level-h match relation.
    std::span<const Code> prefix(int h) const {
        if (h < 1 || h > levels())
            throw InvalidLevel("prefix level " + std::to_string(h) + " out of range [1," +
                               std::to_string(levels()) + "]");
        return std::span<const Code>(components_.data(), static_cast<std::size_t>(h));
    }

    bool is_unknown() const { return !components_.empty() && components_[0] == kUnknownCode; }

    bool operator==(const Encoding&) const = default;

private:
    std::vector<Code> components_;
};

// ---------------------------------------------------------------------------
// SemanticForest
// ---------------------------------------------------------------------------

// The place-name -> encoding dictionary. Besides the raw code paths it keeps,
// per hierarchy level, a dense id for every distinct prefix observed at that
// level, so prefix equality reduces to an integer compare in the hot paths.
// Level 1 keys are the raw type codes themselves (a length-1 prefix already
// is a single integer); deeper levels get dense ids in entry order.
class SemanticForest {
public:
    struct Entry {
        std::string name;
        Encoding encoding;
        std::vector<Code> level_keys; // level_keys[h-1] identifies prefix(h)
    };

    // Builds the forest from entries in load order. Throws DuplicatePlace or
    // MalformedForest when the inputs violate the dictionary invariants.
    SemanticForest(int levels, std::vector<std::pair<std::string, Encoding>> entries);

    int levels() const { return levels_; }
    std::size_t size() const { return entries_.size(); }

    // level_cardinalities()[h-1] = number of distinct prefix(h) values.
    // Index 0 is Q, the type-vocabulary size.
    const std::vector<std::size_t>& level_cardinalities() const { return level_cardinalities_; }
    std::size_t type_count() const { return level_cardinalities_[0]; }

    const Entry* find(const std::string& place_name) const {
        auto it = index_.find(place_name);
        return it == index_.end() ? nullptr : &entries_[it->second];
    }

    const std::vector<Entry>& entries() const { return entries_; }
    const Entry& entry(std::size_t i) const { return entries_[i]; }

    // Content fingerprint; encoded trajectories carry it so that mixing
    // forests in one similarity computation is detected.
    std::uint64_t tag() const { return tag_; }

private:
    int levels_ = 0;
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::size_t> level_cardinalities_;
    std::uint64_t tag_ = 0;
};

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

// One user's visiting sequence. A place appears t times when the stay spanned
// t intervals of the upstream stay threshold; this repetition is preserved
// through the whole pipeline. (The stay threshold itself belongs to the GPS
// preprocessing that produces these inputs and plays no role here.)
struct Trajectory {
    TrajectoryId id = 0;
    std::vector<std::string> places;
};

// A trajectory after dictionary lookup: one encoding per visited place, in
// visiting order. level_keys(h) is the dense per-level view used by the
// shingler and the similarity kernels; kUnknownCode marks unknown places.
class EncodedTrajectory {
public:
    EncodedTrajectory() = default;
    EncodedTrajectory(TrajectoryId id, std::vector<Encoding> encs, std::vector<std::vector<Code>> level_keys,
                      std::uint64_t forest_tag)
        : id_(id), encs_(std::move(encs)), level_keys_(std::move(level_keys)), forest_tag_(forest_tag) {}

    TrajectoryId id() const { return id_; }
    std::size_t length() const { return encs_.size(); }
    int levels() const { return static_cast<int>(level_keys_.size()); }
    const std::vector<Encoding>& encodings() const { return encs_; }
    std::uint64_t forest_tag() const { return forest_tag_; }

    std::span<const Code> level_keys(int h) const {
        if (h < 1 || h > levels())
            throw InvalidLevel("level " + std::to_string(h) + " out of range [1," +
                               std::to_string(levels()) + "]");
        return level_keys_[static_cast<std::size_t>(h) - 1];
    }

    // The type-code sequence (level 1), the shingling alphabet.
    std::span<const Code> type_keys() const { return level_keys_[0]; }

private:
    TrajectoryId id_ = 0;
    std::vector<Encoding> encs_;
    std::vector<std::vector<Code>> level_keys_;
    std::uint64_t forest_tag_ = 0;
};

// ---------------------------------------------------------------------------
// Scored pairs and communities
// ---------------------------------------------------------------------------

// A pair of trajectories with their multi-level similarity. per_level_matches
// holds |M_h| for h = 1..n and is non-increasing coarse to fine; score is the
// weighted sum of those counts under the weights in force.
struct ScoredPair {
    TrajectoryId id1 = 0; // id1 < id2 always
    TrajectoryId id2 = 0;
    double score = 0.0;
    std::vector<std::uint32_t> per_level_matches;

    bool operator==(const ScoredPair&) const = default;
};

// A maximal set of users whose pairwise similarity all clears the threshold.
struct Community {
    std::vector<TrajectoryId> members; // ascending

    bool operator==(const Community&) const = default;
    bool operator<(const Community& o) const { return members < o.members; }
};

// ---------------------------------------------------------------------------
// SimilarityConfig
// ---------------------------------------------------------------------------

struct SimilarityConfig {
    int levels = 3;
    int k = 3;                    // shingle length
    std::vector<double> weights;  // beta_h, one per level, summing to 1
    double threshold = 2.0;       // rho; pairs are kept when score > rho (strict)

    static SimilarityConfig defaults(int levels = 3) {
        SimilarityConfig cfg;
        cfg.levels = levels;
        cfg.weights.assign(static_cast<std::size_t>(levels), 1.0 / levels);
        return cfg;
    }

    // Throws InvalidConfig on hard violations (weights, k, threshold, levels).
    void validate() const;

    // The hashing stage finds every pair above threshold only when
    // k <= floor(rho) + 1. Violating this is legal but forfeits full recall,
    // so callers surface it as a warning rather than an error.
    bool recall_guarantee_holds() const {
        return k <= static_cast<int>(std::floor(threshold)) + 1;
    }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Orders a pair of distinct ids as (min, max) so each unordered pair has one
// canonical representation and is computed exactly once downstream.
inline std::pair<TrajectoryId, TrajectoryId> canonical_pair(TrajectoryId a, TrajectoryId b) {
    if (a == b)
        throw InvalidPair("self-pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

} // namespace semtraj

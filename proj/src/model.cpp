#include "semtraj/model.hpp"

#include <algorithm>
#include <map>

namespace semtraj {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

SemanticForest::SemanticForest(int levels, std::vector<std::pair<std::string, Encoding>> entries) {
    if (levels < 1)
        throw MalformedForest("forest must have at least one level, got " + std::to_string(levels));
    if (entries.empty())
        throw MalformedForest("forest has no entries");

    levels_ = levels;
    entries_.reserve(entries.size());
    index_.reserve(entries.size());

    // Dense prefix ids per level, assigned in entry order. Level 1 keeps the
    // raw type code so the shingling alphabet matches the source encodings.
    std::vector<std::map<std::vector<Code>, Code>> prefix_ids(static_cast<std::size_t>(levels));
    std::uint64_t tag = 1469598103934665603ULL;
    tag = fnv1a(tag, static_cast<std::uint64_t>(levels));

    for (auto& [name, enc] : entries) {
        if (name.empty())
            throw MalformedForest("empty place name");
        if (enc.levels() != levels)
            throw MalformedForest("place '" + name + "' has " + std::to_string(enc.levels()) +
                                  " components, expected " + std::to_string(levels));
        for (Code c : enc.components())
            if (c < 0)
                throw MalformedForest("place '" + name + "' has a negative code component");
        if (index_.count(name))
            throw DuplicatePlace("place '" + name + "' appears twice");

        std::vector<Code> level_keys(static_cast<std::size_t>(levels));
        for (int h = 1; h <= levels; ++h) {
            auto pfx = enc.prefix(h);
            std::vector<Code> key(pfx.begin(), pfx.end());
            if (h == 1) {
                prefix_ids[0].emplace(key, enc.component(1));
                level_keys[0] = enc.component(1);
            } else {
                auto [it, _] = prefix_ids[static_cast<std::size_t>(h - 1)].emplace(
                    std::move(key), static_cast<Code>(prefix_ids[static_cast<std::size_t>(h - 1)].size()));
                level_keys[static_cast<std::size_t>(h - 1)] = it->second;
            }
        }

        tag = fnv1a(tag, name);
        for (Code c : enc.components())
            tag = fnv1a(tag, static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)));

        index_.emplace(name, entries_.size());
        entries_.push_back(Entry{name, std::move(enc), std::move(level_keys)});
    }

    // Two names mapping to the same full code path would make decoding
    // ambiguous; reject it.
    if (prefix_ids[static_cast<std::size_t>(levels - 1)].size() != entries_.size())
        throw MalformedForest("two place names share one full encoding");

    level_cardinalities_.reserve(static_cast<std::size_t>(levels));
    for (const auto& ids : prefix_ids)
        level_cardinalities_.push_back(ids.size());
    tag_ = tag;
}

void SimilarityConfig::validate() const {
    if (levels < 1)
        throw InvalidConfig("levels must be >= 1, got " + std::to_string(levels));
    if (k < 1)
        throw InvalidConfig("shingle length k must be >= 1, got " + std::to_string(k));
    if (threshold < 0)
        throw InvalidConfig("threshold must be >= 0, got " + std::to_string(threshold));
    if (weights.size() != static_cast<std::size_t>(levels))
        throw InvalidConfig("expected " + std::to_string(levels) + " weights, got " +
                            std::to_string(weights.size()));
    double sum = 0.0;
    for (double w : weights) {
        if (w <= 0)
            throw InvalidConfig("weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw InvalidConfig("weights must sum to 1, got " + std::to_string(sum));
}

} // namespace semtraj

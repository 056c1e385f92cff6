#include "semtraj/encoder.hpp"

namespace semtraj {

SemanticForest load_forest(const ForestSource& source) {
    if (source.rows.empty())
        throw MalformedForest("forest source has no rows");

    const std::size_t levels = source.rows.front().second.size();
    if (levels == 0)
        throw MalformedForest("forest row '" + source.rows.front().first + "' has no code components");

    std::vector<std::pair<std::string, Encoding>> entries;
    entries.reserve(source.rows.size());
    for (const auto& [name, codes] : source.rows) {
        if (codes.size() != levels)
            throw MalformedForest("inconsistent component count: '" + name + "' has " +
                                  std::to_string(codes.size()) + ", expected " + std::to_string(levels));
        entries.emplace_back(name, Encoding(codes));
    }
    return SemanticForest(static_cast<int>(levels), std::move(entries));
}

EncodedTrajectory encode_trajectory(const Trajectory& t, const SemanticForest& forest) {
    if (t.places.empty())
        throw MalformedInput("trajectory " + std::to_string(t.id) + " has no places");

    const int n = forest.levels();
    std::vector<Encoding> encs;
    encs.reserve(t.places.size());
    std::vector<std::vector<Code>> level_keys(static_cast<std::size_t>(n));
    for (auto& lk : level_keys)
        lk.reserve(t.places.size());

    for (const std::string& place : t.places) {
        if (const SemanticForest::Entry* e = forest.find(place)) {
            encs.push_back(e->encoding);
            for (int h = 0; h < n; ++h)
                level_keys[static_cast<std::size_t>(h)].push_back(e->level_keys[static_cast<std::size_t>(h)]);
        } else {
            encs.push_back(Encoding::unknown(n));
            for (int h = 0; h < n; ++h)
                level_keys[static_cast<std::size_t>(h)].push_back(kUnknownCode);
        }
    }
    return EncodedTrajectory(t.id, std::move(encs), std::move(level_keys), forest.tag());
}

std::vector<std::vector<Code>> level_view(const EncodedTrajectory& et, int h) {
    if (h < 1 || h > et.levels())
        throw InvalidLevel("level " + std::to_string(h) + " out of range [1," +
                           std::to_string(et.levels()) + "]");
    std::vector<std::vector<Code>> out;
    out.reserve(et.length());
    for (const Encoding& e : et.encodings()) {
        auto pfx = e.prefix(h);
        out.emplace_back(pfx.begin(), pfx.end());
    }
    return out;
}

std::vector<Code> type_view(const EncodedTrajectory& et) {
    auto keys = et.type_keys();
    return std::vector<Code>(keys.begin(), keys.end());
}

} // namespace semtraj

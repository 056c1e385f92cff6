#include "semtraj/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace semtraj {

namespace {

// Portable draws. mt19937_64 output is pinned by the standard, but the
// standard distributions are not; these keep generated datasets (and the
// regression fixtures frozen from them) identical across toolchains.
std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(gen()) * n) >> 64);
}

std::uint64_t uniform_range(std::mt19937_64& gen, std::uint64_t lo, std::uint64_t hi) {
    return lo + uniform_below(gen, hi - lo + 1);
}

double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

} // namespace

ForestSource gen_forest(const ForestGenConfig& cfg) {
    if (cfg.num_types < 1 || cfg.classes_per_type < 1)
        throw InvalidConfig("num_types and classes_per_type must be >= 1");
    const std::size_t num_classes =
        static_cast<std::size_t>(cfg.num_types) * static_cast<std::size_t>(cfg.classes_per_type);
    if (cfg.num_places < num_classes)
        throw InvalidConfig("num_places (" + std::to_string(cfg.num_places) +
                            ") must be >= num_types*classes_per_type (" + std::to_string(num_classes) + ")");

    std::mt19937_64 gen(cfg.seed);

    ForestSource source;
    source.rows.reserve(cfg.num_places);
    std::vector<Code> next_name(num_classes, 1);

    char name[32];
    for (std::size_t i = 0; i < cfg.num_places; ++i) {
        // Round-robin the first pass so every class is inhabited, then draw
        // uniformly; at exactly one place per class the draw never happens.
        std::size_t cls = i < num_classes ? i : uniform_below(gen, num_classes);
        Code type_code = static_cast<Code>(cls / static_cast<std::size_t>(cfg.classes_per_type)) + 1;
        Code class_code = static_cast<Code>(cls % static_cast<std::size_t>(cfg.classes_per_type)) + 1;
        Code name_code = next_name[cls]++;
        std::snprintf(name, sizeof(name), "place_%08zu", i + 1);
        source.rows.emplace_back(name, std::vector<Code>{type_code, class_code, name_code});
    }
    return source;
}

namespace {

// Draws entry indices either uniformly or Zipf-by-rank via the inverse CDF.
class PlacePicker {
public:
    PlacePicker(std::size_t count, double zipf_exponent) : count_(count) {
        if (zipf_exponent > 0.0) {
            cdf_.reserve(count);
            double acc = 0.0;
            for (std::size_t r = 1; r <= count; ++r) {
                acc += 1.0 / std::pow(static_cast<double>(r), zipf_exponent);
                cdf_.push_back(acc);
            }
        }
    }

    std::size_t operator()(std::mt19937_64& gen) const {
        if (cdf_.empty())
            return uniform_below(gen, count_);
        double u = cdf_.back() * uniform_unit(gen);
        return static_cast<std::size_t>(
            std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    }

private:
    std::size_t count_;
    std::vector<double> cdf_;
};

} // namespace

std::vector<Trajectory> gen_trajectories(const TrajectoryGenConfig& cfg, const SemanticForest& forest) {
    if (cfg.len_min < 1 || cfg.len_max < cfg.len_min)
        throw InvalidConfig("invalid length range [" + std::to_string(cfg.len_min) + ", " +
                            std::to_string(cfg.len_max) + "]");
    if (cfg.count == 0)
        return {};

    PlantSpec plant{};
    if (cfg.plant) {
        plant = *cfg.plant;
        if (plant.level == 0)
            plant.level = forest.levels();
        if (plant.level < 1 || plant.level > forest.levels())
            throw InvalidConfig("plant level out of range");
        if (plant.subseq_len > cfg.len_max)
            throw InvalidConfig("planted subsequence longer than len_max");
        if (plant.groups * plant.group_size > cfg.count)
            throw InvalidConfig("planted trajectories exceed requested count");
    }

    std::mt19937_64 gen(cfg.seed);
    PlacePicker pick(forest.size(), cfg.zipf_exponent);
    auto pick_len = [&](std::mt19937_64& g) {
        return static_cast<std::size_t>(uniform_range(g, cfg.len_min, cfg.len_max));
    };

    // Entries grouped by shared prefix, built on demand for shallow plants.
    std::map<std::vector<Code>, std::vector<std::size_t>> by_prefix;
    if (cfg.plant && plant.level < forest.levels()) {
        for (std::size_t i = 0; i < forest.size(); ++i) {
            auto pfx = forest.entry(i).encoding.prefix(plant.level);
            by_prefix[std::vector<Code>(pfx.begin(), pfx.end())].push_back(i);
        }
    }

    std::vector<Trajectory> out;
    out.reserve(cfg.count);
    TrajectoryId next_id = 1;

    auto random_trajectory = [&](std::size_t len) {
        Trajectory t;
        t.id = next_id++;
        t.places.reserve(len);
        for (std::size_t p = 0; p < len; ++p)
            t.places.push_back(forest.entry(pick(gen)).name);
        return t;
    };

    if (cfg.plant) {
        for (std::size_t g = 0; g < plant.groups; ++g) {
            // The group's shared subsequence, as prefixes of concrete places.
            std::vector<std::size_t> anchor(plant.subseq_len);
            for (auto& a : anchor)
                a = pick(gen);

            for (std::size_t m = 0; m < plant.group_size; ++m) {
                std::size_t len = pick_len(gen);
                len = std::max(len, plant.subseq_len);
                Trajectory t = random_trajectory(len);

                // Choose increasing positions for the shared subsequence.
                std::vector<std::size_t> pos(len);
                for (std::size_t p = 0; p < len; ++p)
                    pos[p] = p;
                for (std::size_t p = 0; p < plant.subseq_len; ++p)
                    std::swap(pos[p], pos[uniform_range(gen, p, len - 1)]);
                pos.resize(plant.subseq_len);
                std::sort(pos.begin(), pos.end());

                for (std::size_t p = 0; p < plant.subseq_len; ++p) {
                    std::size_t entry = anchor[p];
                    if (plant.level < forest.levels()) {
                        // Any place sharing the anchor's level-h prefix.
                        auto pfx = forest.entry(entry).encoding.prefix(plant.level);
                        const auto& pool = by_prefix.at(std::vector<Code>(pfx.begin(), pfx.end()));
                        entry = pool[uniform_below(gen, pool.size())];
                    }
                    t.places[pos[p]] = forest.entry(entry).name;
                }
                out.push_back(std::move(t));
            }
        }
    }

    while (out.size() < cfg.count)
        out.push_back(random_trajectory(pick_len(gen)));
    return out;
}

} // namespace semtraj

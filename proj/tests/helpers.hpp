#pragma once
// Shared fixtures: the hand-built demo forest with the frequent-flyer pair
// whose per-level matches are (7, 3, 1), plus small generators and a temp
// directory guard for file-format tests.

#include "semtraj/datagen.hpp"
#include "semtraj/encoder.hpp"
#include "semtraj/model.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace helpers {

using namespace semtraj;

// Forest behind the worked example. Types: 1 transportation, 2 lodging,
// 3 dining, 4 education, 5 shopping, 6 business, 7 entertainment.
inline ForestSource demo_forest_source() {
    ForestSource s;
    s.rows = {
        {"Tokyo Station", {1, 1, 1}},
        {"Sydney Station", {1, 1, 2}},
        {"Sydney Airport", {1, 2, 1}},
        {"O'Hare Airport", {1, 2, 2}},
        {"Tokyo Airport", {1, 2, 3}},
        {"Paris-Charles De Gaulle", {1, 2, 4}},
        {"Maris Apartment", {2, 1, 1}},
        {"Windy Apartment", {2, 2, 1}},
        {"KFC", {3, 1, 1}},
        {"Restaurant Goude", {3, 2, 1}},
        {"Lakeside High School", {4, 1, 1}},
        {"Sydney Grammar School", {4, 1, 2}},
        {"State University", {4, 2, 1}},
        {"Green Grocers", {5, 1, 1}},
        {"Sunset Mall", {5, 2, 1}},
        {"Facebook Japan", {6, 1, 1}},
        {"Microsoft France", {6, 1, 2}},
        {"Sony Japan", {6, 1, 3}},
        {"Acme Corporation", {6, 1, 4}},
        {"Paris Convention Center", {6, 2, 1}},
        {"Cinema Paradiso", {7, 1, 1}},
    };
    return s;
}

inline SemanticForest demo_forest() { return load_forest(demo_forest_source()); }

// Type sequence [2,1,1,1,6,3,6,2]; matches the flyer below at (7, 3, 1).
inline Trajectory carol(TrajectoryId id = 1) {
    return Trajectory{id,
                      {"Maris Apartment", "Sydney Airport", "O'Hare Airport", "Tokyo Airport",
                       "Facebook Japan", "KFC", "Sony Japan", "Maris Apartment"}};
}

// Type sequence [2,1,1,6,3,6,1,1,2].
inline Trajectory dave(TrajectoryId id = 2) {
    return Trajectory{id,
                      {"Windy Apartment", "O'Hare Airport", "Paris-Charles De Gaulle",
                       "Microsoft France", "Restaurant Goude", "Paris Convention Center",
                       "Paris-Charles De Gaulle", "O'Hare Airport", "Windy Apartment"}};
}

// Random code sequence over [0, alphabet).
inline std::vector<Code> random_codes(std::mt19937_64& gen, std::size_t len, Code alphabet) {
    std::uniform_int_distribution<Code> pick(0, alphabet - 1);
    std::vector<Code> out(len);
    for (auto& c : out)
        c = pick(gen);
    return out;
}

// Self-cleaning unique temp directory.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        std::string tmpl = (base / "semtraj_test_XXXXXX").string();
        if (!mkdtemp(tmpl.data()))
            throw std::runtime_error("mkdtemp failed");
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace helpers

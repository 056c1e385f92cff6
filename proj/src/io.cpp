#include "semtraj/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace semtraj::io {

using nlohmann::json;

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw MalformedInput("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw MalformedInput("cannot open '" + path + "' for writing");
    return out;
}

json parse_line(const std::string& line, const std::string& path, std::size_t lineno) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
        throw MalformedInput(path + ":" + std::to_string(lineno) + ": invalid JSON");
    return j;
}

[[noreturn]] void bad_line(const std::string& path, std::size_t lineno, const std::string& what) {
    throw MalformedInput(path + ":" + std::to_string(lineno) + ": " + what);
}

template <class T>
T parse_number(std::string_view field, const std::string& path, std::size_t lineno) {
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        bad_line(path, lineno, "bad numeric field '" + std::string(field) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

} // namespace

std::vector<Trajectory> read_trajectories_jsonl(const std::string& path) {
    auto in = open_in(path);
    std::vector<Trajectory> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        json j = parse_line(line, path, lineno);
        if (!j.is_object() || !j.contains("id") || !j.contains("places"))
            bad_line(path, lineno, "expected an object with 'id' and 'places'");
        if (!j["id"].is_number_unsigned())
            bad_line(path, lineno, "'id' must be an unsigned integer");
        if (!j["places"].is_array() || j["places"].empty())
            bad_line(path, lineno, "'places' must be a non-empty array");
        Trajectory t;
        t.id = j["id"].get<std::uint64_t>();
        t.places.reserve(j["places"].size());
        for (const auto& p : j["places"]) {
            if (!p.is_string() || p.get_ref<const std::string&>().empty())
                bad_line(path, lineno, "places must be non-empty strings");
            t.places.push_back(p.get<std::string>());
        }
        out.push_back(std::move(t));
    }
    std::unordered_set<TrajectoryId> ids;
    ids.reserve(out.size());
    for (const auto& t : out)
        if (!ids.insert(t.id).second)
            throw MalformedInput(path + ": duplicate trajectory id " + std::to_string(t.id));
    return out;
}

void write_trajectories_jsonl(const std::string& path, std::span<const Trajectory> trajectories) {
    auto out = open_out(path);
    for (const auto& t : trajectories) {
        json j;
        j["id"] = t.id;
        j["places"] = t.places;
        out << j.dump() << '\n';
    }
}

ForestSource read_forest_tsv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw MalformedForest(path + ": empty forest file");
    int levels = 0;
    if (std::sscanf(line.c_str(), "#levels=%d", &levels) != 1 || levels < 1)
        throw MalformedForest(path + ":1: expected header '#levels=n'");

    ForestSource source;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        auto fields = split(line, '\t');
        if (fields.size() != static_cast<std::size_t>(levels) + 1)
            bad_line(path, lineno, "expected name + " + std::to_string(levels) + " codes");
        if (fields[0].empty())
            bad_line(path, lineno, "empty place name");
        std::vector<Code> codes;
        codes.reserve(static_cast<std::size_t>(levels));
        for (std::size_t f = 1; f < fields.size(); ++f)
            codes.push_back(parse_number<Code>(fields[f], path, lineno));
        source.rows.emplace_back(std::string(fields[0]), std::move(codes));
    }
    return source;
}

void write_forest_tsv(const std::string& path, const ForestSource& source) {
    if (source.rows.empty())
        throw MalformedForest("refusing to write an empty forest");
    auto out = open_out(path);
    const std::size_t levels = source.rows.front().second.size();
    out << "#levels=" << levels << '\n';
    for (const auto& [name, codes] : source.rows) {
        if (name.find('\t') != std::string::npos || name.find('\n') != std::string::npos)
            throw MalformedForest("place name '" + name + "' contains a tab or newline");
        out << name;
        for (Code c : codes)
            out << '\t' << c;
        out << '\n';
    }
}

void write_encoded_jsonl(const std::string& path, std::span<const EncodedTrajectory> encoded) {
    auto out = open_out(path);
    for (const auto& et : encoded) {
        json encs = json::array();
        for (const auto& e : et.encodings())
            encs.push_back(std::vector<Code>(e.components().begin(), e.components().end()));
        json j;
        j["id"] = et.id();
        j["encs"] = std::move(encs);
        out << j.dump() << '\n';
    }
}

std::vector<std::pair<TrajectoryId, std::vector<Encoding>>> read_encoded_jsonl(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::pair<TrajectoryId, std::vector<Encoding>>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        json j = parse_line(line, path, lineno);
        if (!j.is_object() || !j.contains("id") || !j.contains("encs") || !j["encs"].is_array())
            bad_line(path, lineno, "expected an object with 'id' and 'encs'");
        std::vector<Encoding> encs;
        encs.reserve(j["encs"].size());
        for (const auto& comp : j["encs"]) {
            if (!comp.is_array() || comp.empty())
                bad_line(path, lineno, "each encoding must be a non-empty array of codes");
            encs.emplace_back(comp.get<std::vector<Code>>());
        }
        out.emplace_back(j["id"].get<std::uint64_t>(), std::move(encs));
    }
    return out;
}

void write_pairs_csv(const std::string& path, const CandidatePairSet& pairs) {
    auto out = open_out(path);
    out << "id1,id2\n";
    for (const auto& [a, b] : pairs.pairs)
        out << a << ',' << b << '\n';
}

CandidatePairSet read_pairs_csv(const std::string& path) {
    auto in = open_in(path);
    CandidatePairSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (lineno == 1 && line.rfind("id1,", 0) == 0))
            continue;
        auto fields = split(line, ',');
        if (fields.size() != 2)
            bad_line(path, lineno, "expected id1,id2");
        set.pairs.emplace_back(parse_number<TrajectoryId>(fields[0], path, lineno),
                               parse_number<TrajectoryId>(fields[1], path, lineno));
    }
    std::sort(set.pairs.begin(), set.pairs.end());
    set.pairs.erase(std::unique(set.pairs.begin(), set.pairs.end()), set.pairs.end());
    return set;
}

void write_scored_csv(const std::string& path, std::span<const ScoredPair> scored, int levels) {
    auto out = open_out(path);
    out << "id1,id2,score";
    for (int h = 1; h <= levels; ++h)
        out << ",m" << h;
    out << '\n';
    char buf[64];
    for (const auto& sp : scored) {
        std::snprintf(buf, sizeof(buf), "%" PRIu64 ",%" PRIu64 ",%.6f", sp.id1, sp.id2, sp.score);
        out << buf;
        for (std::uint32_t m : sp.per_level_matches)
            out << ',' << m;
        out << '\n';
    }
}

std::vector<ScoredPair> read_scored_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<ScoredPair> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (lineno == 1 && line.rfind("id1,", 0) == 0))
            continue;
        auto fields = split(line, ',');
        if (fields.size() < 3)
            bad_line(path, lineno, "expected id1,id2,score[,m...]");
        ScoredPair sp;
        sp.id1 = parse_number<TrajectoryId>(fields[0], path, lineno);
        sp.id2 = parse_number<TrajectoryId>(fields[1], path, lineno);
        sp.score = parse_number<double>(fields[2], path, lineno);
        for (std::size_t f = 3; f < fields.size(); ++f)
            sp.per_level_matches.push_back(parse_number<std::uint32_t>(fields[f], path, lineno));
        out.push_back(std::move(sp));
    }
    return out;
}

void write_communities_jsonl(const std::string& path, std::span<const Community> communities) {
    auto out = open_out(path);
    for (const auto& c : communities) {
        json j;
        j["members"] = c.members;
        out << j.dump() << '\n';
    }
}

std::vector<Community> read_communities_jsonl(const std::string& path) {
    auto in = open_in(path);
    std::vector<Community> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        json j = parse_line(line, path, lineno);
        if (!j.is_object() || !j.contains("members") || !j["members"].is_array())
            bad_line(path, lineno, "expected an object with 'members'");
        Community c;
        c.members = j["members"].get<std::vector<TrajectoryId>>();
        out.push_back(std::move(c));
    }
    return out;
}

std::string report_to_json(const EvalReport& report, const ReportConfigEcho& config) {
    json stages = json::object();
    for (const auto& [stage, ms] : report.stage_ms)
        stages[stage] = ms;

    json cfg;
    cfg["levels"] = config.levels;
    cfg["k"] = config.k;
    cfg["weights"] = config.weights;
    cfg["threshold"] = config.threshold;
    cfg["mode"] = config.mode;
    if (config.seed)
        cfg["seed"] = *config.seed;

    json j;
    j["report_version"] = 1;
    j["qa1"] = report.qa1 ? json(*report.qa1) : json(nullptr);
    j["qa2"] = report.qa2 ? json(*report.qa2) : json(nullptr);
    j["pairs_compared"] = report.pairs_compared;
    j["stages_ms"] = std::move(stages);
    j["total_ms"] = report.total_ms;
    j["worker_count"] = report.worker_count;
    j["config"] = std::move(cfg);
    return j.dump(2) + "\n";
}

void write_report_json(const std::string& path, const EvalReport& report,
                       const ReportConfigEcho& config) {
    auto out = open_out(path);
    out << report_to_json(report, config);
}

} // namespace semtraj::io

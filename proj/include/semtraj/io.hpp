#pragma once
// File formats: JSON Lines for trajectories, encodings, and communities;
// TSV for the forest; CSV for pair sets; JSON for reports. Writers emit
// LF-terminated UTF-8 with stable field order, so equal inputs produce
// byte-identical files.

#include "semtraj/encoder.hpp"
#include "semtraj/eval.hpp"
#include "semtraj/model.hpp"
#include "semtraj/partitioner.hpp"

#include <optional>
#include <string>

namespace semtraj::io {

// --- trajectories: {"id": <u64>, "places": ["...", ...]} per line ---------
std::vector<Trajectory> read_trajectories_jsonl(const std::string& path);
void write_trajectories_jsonl(const std::string& path, std::span<const Trajectory> trajectories);

// --- forest: "#levels=n" header, then name<TAB>c1<TAB>...<TAB>cn ----------
ForestSource read_forest_tsv(const std::string& path);
void write_forest_tsv(const std::string& path, const ForestSource& source);

// --- encoded trajectories: {"encs": [[c1..cn], ...], "id": <u64>} ---------
void write_encoded_jsonl(const std::string& path, std::span<const EncodedTrajectory> encoded);
std::vector<std::pair<TrajectoryId, std::vector<Encoding>>> read_encoded_jsonl(const std::string& path);

// --- candidate pairs: CSV id1,id2 ------------------------------------------
void write_pairs_csv(const std::string& path, const CandidatePairSet& pairs);
CandidatePairSet read_pairs_csv(const std::string& path);

// --- scored pairs: CSV id1,id2,score,m1,...,mn (score with 6 decimals) -----
void write_scored_csv(const std::string& path, std::span<const ScoredPair> scored, int levels);
std::vector<ScoredPair> read_scored_csv(const std::string& path);

// --- communities: {"members": [ids ascending]} per line, sorted ------------
void write_communities_jsonl(const std::string& path, std::span<const Community> communities);
std::vector<Community> read_communities_jsonl(const std::string& path);

// --- report -----------------------------------------------------------------
struct ReportConfigEcho {
    int levels = 3;
    int k = 3;
    std::vector<double> weights;
    double threshold = 2.0;
    std::string mode = "staged";
    std::optional<std::uint64_t> seed;
};

void write_report_json(const std::string& path, const EvalReport& report,
                       const ReportConfigEcho& config);
std::string report_to_json(const EvalReport& report, const ReportConfigEcho& config);

} // namespace semtraj::io

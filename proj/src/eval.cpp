#include "semtraj/eval.hpp"

#include "semtraj/pipeline.hpp"

#include <algorithm>
#include <set>

namespace semtraj {

double qa1(std::span<const Community> dis, std::span<const Community> cen) {
    if (cen.empty())
        throw UndefinedMetric("centralized community set is empty; QA1 undefined");
    std::set<std::vector<TrajectoryId>> cen_set;
    for (const auto& c : cen)
        cen_set.insert(c.members);
    std::size_t matched = 0;
    std::set<std::vector<TrajectoryId>> seen;
    for (const auto& c : dis)
        if (cen_set.count(c.members) && seen.insert(c.members).second)
            ++matched;
    return static_cast<double>(matched) / static_cast<double>(cen_set.size());
}

double qa2(const CandidatePairSet& pairs_dis, const CandidatePairSet& pairs_cen) {
    if (pairs_cen.pairs.empty())
        throw UndefinedMetric("centralized pair set is empty; QA2 undefined");
    std::vector<std::pair<TrajectoryId, TrajectoryId>> common;
    std::set_intersection(pairs_dis.pairs.begin(), pairs_dis.pairs.end(),
                          pairs_cen.pairs.begin(), pairs_cen.pairs.end(),
                          std::back_inserter(common));
    return static_cast<double>(common.size()) / static_cast<double>(pairs_cen.pairs.size());
}

EvalReport bench(const Dataset& dataset, const PipelineConfig& cfg, int repeats) {
    if (repeats < 1)
        throw InvalidConfig("repeats must be >= 1, got " + std::to_string(repeats));

    PipelineResult warm = run_pipeline(dataset, cfg); // discarded warmup

    std::vector<PipelineResult> runs;
    runs.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        runs.push_back(run_pipeline(dataset, cfg));
        if (runs.back().similar != warm.similar || runs.back().communities != warm.communities)
            throw std::logic_error("pipeline output changed between repeats");
    }

    EvalReport report = runs.front().report;
    report.total_ms = 0.0;
    for (std::size_t s = 0; s < report.stage_ms.size(); ++s) {
        std::vector<double> samples;
        samples.reserve(runs.size());
        for (const auto& run : runs)
            samples.push_back(run.report.stage_ms[s].second);
        std::sort(samples.begin(), samples.end());
        // median; even counts take the lower-middle average
        double median = samples.size() % 2 == 1
                            ? samples[samples.size() / 2]
                            : 0.5 * (samples[samples.size() / 2 - 1] + samples[samples.size() / 2]);
        report.stage_ms[s].second = median;
        report.total_ms += median;
    }
    return report;
}

} // namespace semtraj

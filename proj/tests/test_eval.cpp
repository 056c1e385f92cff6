#include "helpers.hpp"

#include "semtraj/datagen.hpp"
#include "semtraj/eval.hpp"
#include "semtraj/pipeline.hpp"

#include <doctest.h>

using namespace semtraj;

TEST_SUITE_BEGIN("eval");

namespace {

Community comm(std::initializer_list<TrajectoryId> ids) {
    return Community{std::vector<TrajectoryId>(ids)};
}

CandidatePairSet pairs(std::initializer_list<std::pair<TrajectoryId, TrajectoryId>> ps) {
    CandidatePairSet set;
    set.pairs.assign(ps.begin(), ps.end());
    std::sort(set.pairs.begin(), set.pairs.end());
    return set;
}

} // namespace

TEST_CASE("qa1 community matching is exact member-set equality") {
    std::vector<Community> cen{comm({1, 2}), comm({3, 4, 5}), comm({6, 7})};

    CHECK(qa1(cen, cen) == doctest::Approx(1.0));

    std::vector<Community> disjoint{comm({8, 9})};
    CHECK(qa1(disjoint, cen) == doctest::Approx(0.0));

    std::vector<Community> partial{comm({1, 2}), comm({3, 4, 5})};
    CHECK(qa1(partial, cen) == doctest::Approx(2.0 / 3.0));

    // near-miss members do not count
    std::vector<Community> off_by_one{comm({1, 2}), comm({3, 4})};
    CHECK(qa1(off_by_one, cen) == doctest::Approx(1.0 / 3.0));

    CHECK_THROWS_AS(qa1(partial, {}), UndefinedMetric);
}

TEST_CASE("qa2 pair recall") {
    auto cen = pairs({{1, 2}, {3, 4}, {5, 6}, {7, 8}});
    CHECK(qa2(cen, cen) == doctest::Approx(1.0));
    CHECK(qa2(pairs({{9, 10}}), cen) == doctest::Approx(0.0));
    CHECK(qa2(pairs({{1, 2}, {3, 4}, {5, 6}, {9, 10}}), cen) == doctest::Approx(0.75));
    CHECK_THROWS_AS(qa2(cen, CandidatePairSet{}), UndefinedMetric);
}

TEST_CASE("to_pair_set extracts canonical sorted ids") {
    ScoredPair a;
    a.id1 = 3;
    a.id2 = 9;
    ScoredPair b;
    b.id1 = 1;
    b.id2 = 2;
    auto set = to_pair_set(std::vector<ScoredPair>{a, b, a});
    REQUIRE(set.pairs.size() == 2);
    CHECK(set.pairs[0] == std::pair<TrajectoryId, TrajectoryId>{1, 2});
    CHECK(set.pairs[1] == std::pair<TrajectoryId, TrajectoryId>{3, 9});
}

TEST_CASE("bench reports stages, medians, and worker-invariant counts") {
    auto forest = load_forest(gen_forest(ForestGenConfig{300, 8, 4, 23}));
    TrajectoryGenConfig tcfg;
    tcfg.count = 120;
    tcfg.seed = 23;
    tcfg.plant = PlantSpec{2, 4, 3, 0};
    Dataset ds{forest, gen_trajectories(tcfg, forest)};

    PipelineConfig pc;
    pc.workers = 2;
    auto report = bench(ds, pc, 3);
    REQUIRE(report.stage_ms.size() == 5);
    CHECK(report.stage_ms[0].first == "encode");
    CHECK(report.stage_ms[1].first == "shingle");
    CHECK(report.stage_ms[2].first == "partition");
    CHECK(report.stage_ms[3].first == "score");
    CHECK(report.stage_ms[4].first == "community");
    for (const auto& [stage, ms] : report.stage_ms)
        CHECK(ms >= 0.0);
    CHECK(report.worker_count == 2);

    // repeats=1: a single measurement, no median ambiguity
    auto single = bench(ds, pc, 1);
    CHECK(single.stage_ms.size() == 5);

    // non-timing fields are worker-invariant
    pc.workers = 4;
    auto wide = bench(ds, pc, 1);
    CHECK(wide.pairs_compared == report.pairs_compared);

    // hashing compares fewer pairs than the all-pairs scan
    std::uint64_t n = ds.trajectories.size();
    CHECK(report.pairs_compared < n * (n - 1) / 2);

    CHECK_THROWS_AS(bench(ds, pc, 0), InvalidConfig);
}

TEST_SUITE_END();

#include "helpers.hpp"
#include "oracles.hpp"

#include "semtraj/baselines.hpp"
#include "semtraj/similarity.hpp"

#include <doctest.h>

#include <random>

using namespace semtraj;

TEST_SUITE_BEGIN("similarity");

namespace {

std::vector<Code> codes(std::initializer_list<int> v) {
    return std::vector<Code>(v.begin(), v.end());
}

// Short alias used all over this suite.
EncodedTrajectory enc(const Trajectory& t, const SemanticForest& forest) {
    return encode_trajectory(t, forest);
}

} // namespace

TEST_CASE("lcs_length basics") {
    CHECK(lcs_length(codes({4, 4, 4, 4, 4, 4, 4, 4}), codes({4, 4, 4, 4, 4, 4, 4, 4})) == 8);
    CHECK(lcs_length(codes({1, 2, 3}), codes({4, 5, 6})) == 0);
    CHECK(lcs_length(codes({}), codes({1})) == 0);
    // A B C B D A B vs B D C A B A
    CHECK(lcs_length(codes({0, 1, 2, 1, 3, 0, 1}), codes({1, 3, 2, 0, 1, 0})) == 4);
}

TEST_CASE("lcs never matches the unknown code, even against itself") {
    CHECK(lcs_length(codes({kUnknownCode}), codes({kUnknownCode})) == 0);
    CHECK(lcs_length(codes({1, kUnknownCode, 2}), codes({1, kUnknownCode, 2})) == 2);
}

TEST_CASE("lcs_length equals the exhaustive oracle on random small inputs") {
    std::mt19937_64 gen(53);
    std::uniform_int_distribution<std::size_t> pick_len(0, 10);
    for (int trial = 0; trial < 1500; ++trial) {
        auto a = helpers::random_codes(gen, pick_len(gen), 4);
        auto b = helpers::random_codes(gen, pick_len(gen), 4);
        CHECK(lcs_length(a, b) == oracles::lcs_exhaustive(a, b));
    }
}

TEST_CASE("the flyer pair matches at (7, 3, 1) and scores 2.8 under (0.2, 0.3, 0.5)") {
    auto forest = helpers::demo_forest();
    auto u = enc(helpers::carol(), forest);
    auto v = enc(helpers::dave(), forest);

    auto cfg = SimilarityConfig::defaults();
    cfg.weights = {0.2, 0.3, 0.5};
    auto sp = mss(u, v, cfg);
    CHECK(sp.per_level_matches == std::vector<std::uint32_t>{7, 3, 1});
    CHECK(sp.score == doctest::Approx(2.8).epsilon(1e-12));

    // equal weights clear the default threshold too
    auto sp_eq = mss(u, v, SimilarityConfig::defaults());
    CHECK(sp_eq.score == doctest::Approx(11.0 / 3.0));
    CHECK(sp_eq.score > 2.0);
}

TEST_CASE("structurally identical trajectories score their full length") {
    auto forest = helpers::demo_forest();
    auto t = helpers::carol(1);
    auto t2 = t;
    t2.id = 99;
    auto cfg = SimilarityConfig::defaults();
    auto sp = mss(enc(t, forest), enc(t2, forest), cfg);
    CHECK(sp.score == doctest::Approx(8.0));
    CHECK(sp.per_level_matches == std::vector<std::uint32_t>{8, 8, 8});
}

TEST_CASE("mss preconditions") {
    auto forest = helpers::demo_forest();
    auto u = enc(helpers::carol(1), forest);
    auto cfg = SimilarityConfig::defaults();
    CHECK_THROWS_AS(mss(u, u, cfg), InvalidPair);

    auto other_forest = load_forest(ForestSource{{{"Somewhere", {1, 1, 1}}}});
    auto w = enc(Trajectory{2, {"Somewhere"}}, other_forest);
    CHECK_THROWS_AS(mss(u, w, cfg), ConfigMismatch);

    auto cfg2 = SimilarityConfig::defaults(2);
    CHECK_THROWS_AS(mss(u, enc(helpers::dave(), forest), cfg2), ConfigMismatch);
}

TEST_CASE("mss equals a per-level oracle with weighted sum, randomly") {
    auto forest = helpers::demo_forest();
    std::mt19937_64 gen(59);
    std::uniform_int_distribution<std::size_t> pick_place(0, forest.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_len(1, 8);

    auto random_traj = [&](TrajectoryId id) {
        Trajectory t{id, {}};
        std::size_t len = pick_len(gen);
        for (std::size_t i = 0; i < len; ++i)
            t.places.push_back(forest.entry(pick_place(gen)).name);
        return t;
    };

    auto cfg = SimilarityConfig::defaults();
    cfg.weights = {0.2, 0.3, 0.5};
    for (int trial = 0; trial < 300; ++trial) {
        auto u = enc(random_traj(1), forest);
        auto v = enc(random_traj(2), forest);
        auto sp = mss(u, v, cfg);

        double expected = 0.0;
        for (int h = 1; h <= 3; ++h) {
            auto mh = oracles::lcs_exhaustive(u.level_keys(h), v.level_keys(h));
            CHECK(sp.per_level_matches[static_cast<std::size_t>(h - 1)] == mh);
            expected += cfg.weights[static_cast<std::size_t>(h - 1)] * mh;
        }
        CHECK(sp.score == doctest::Approx(expected).epsilon(1e-12));

        // per-level matches are monotone non-increasing
        CHECK(sp.per_level_matches[0] >= sp.per_level_matches[1]);
        CHECK(sp.per_level_matches[1] >= sp.per_level_matches[2]);

        // symmetry
        auto sp_rev = mss(v, u, cfg);
        CHECK(sp_rev.score == sp.score);
        CHECK(sp_rev.per_level_matches == sp.per_level_matches);

        // bounds under sum-1 weights
        CHECK(sp.score >= 0.0);
        CHECK(sp.score <= static_cast<double>(std::min(u.length(), v.length())) + 1e-12);
    }
}

TEST_CASE("duplicating a matched place in both trajectories strictly raises the score") {
    auto forest = helpers::demo_forest();
    auto cfg = SimilarityConfig::defaults();
    std::mt19937_64 gen(61);
    std::uniform_int_distribution<std::size_t> pick_place(0, forest.size() - 1);

    for (int trial = 0; trial < 50; ++trial) {
        // shared place plus noise on both sides
        std::string shared = forest.entry(pick_place(gen)).name;
        Trajectory u{1, {shared, forest.entry(pick_place(gen)).name}};
        Trajectory v{2, {forest.entry(pick_place(gen)).name, shared}};
        double base = mss(enc(u, forest), enc(v, forest), cfg).score;

        Trajectory u2 = u;
        Trajectory v2 = v;
        u2.places.push_back(shared);
        v2.places.push_back(shared);
        double doubled = mss(enc(u2, forest), enc(v2, forest), cfg).score;
        CHECK(doubled > base);
    }
}

TEST_CASE("score_candidates: level expansion agrees with direct per-pair scoring") {
    auto forest = helpers::demo_forest();
    std::mt19937_64 gen(67);
    std::uniform_int_distribution<std::size_t> pick_place(0, forest.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_len(2, 9);

    std::vector<EncodedTrajectory> ets;
    for (TrajectoryId id = 1; id <= 60; ++id) {
        Trajectory t{id, {}};
        std::size_t len = pick_len(gen);
        for (std::size_t i = 0; i < len; ++i)
            t.places.push_back(forest.entry(pick_place(gen)).name);
        ets.push_back(enc(t, forest));
    }

    CandidatePairSet pairs;
    for (TrajectoryId a = 1; a <= 60; ++a)
        for (TrajectoryId b = a + 1; b <= 60; b += 3)
            pairs.pairs.push_back({a, b});
    std::sort(pairs.pairs.begin(), pairs.pairs.end());

    TrajectoryIndex index(ets);
    auto cfg = SimilarityConfig::defaults();
    WorkerPool pool(3);
    auto scored = score_candidates(pairs, index, cfg, pool);
    REQUIRE(scored.size() == pairs.pairs.size());
    for (std::size_t i = 0; i < scored.size(); ++i) {
        auto direct = mss(index.at(pairs.pairs[i].first), index.at(pairs.pairs[i].second), cfg);
        CHECK(scored[i] == direct);
    }

    // empty input, and a dangling id
    WorkerPool solo(1);
    CHECK(score_candidates(CandidatePairSet{}, index, cfg, solo).empty());
    CandidatePairSet dangling;
    dangling.pairs.push_back({1, 999});
    CHECK_THROWS_AS(score_candidates(dangling, index, cfg, solo), MissingTrajectory);
}

TEST_CASE("filter_similar keeps strictly-above-threshold scores") {
    auto mk = [](double score) {
        ScoredPair sp;
        sp.id1 = 1;
        sp.id2 = 2;
        sp.score = score;
        return sp;
    };
    auto kept = filter_similar({mk(2.8), mk(2.0), mk(1.99), mk(2.0000001)}, 2.0);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].score == doctest::Approx(2.8));
    CHECK(kept[1].score == doctest::Approx(2.0000001));

    // random set equals the reference filter
    std::mt19937_64 gen(71);
    std::uniform_real_distribution<double> pick(0.0, 4.0);
    std::vector<ScoredPair> scored;
    std::size_t expect = 0;
    for (int i = 0; i < 200; ++i) {
        scored.push_back(mk(pick(gen)));
        if (scored.back().score > 2.0)
            ++expect;
    }
    CHECK(filter_similar(scored, 2.0).size() == expect);
}

TEST_SUITE_END();

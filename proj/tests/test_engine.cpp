#include "helpers.hpp"

#include "semtraj/baselines.hpp"
#include "semtraj/datagen.hpp"
#include "semtraj/engine.hpp"
#include "semtraj/pipeline.hpp"
#include "semtraj/similarity.hpp"

#include <doctest.h>

#include <map>
#include <numeric>
#include <random>

using namespace semtraj;

TEST_SUITE_BEGIN("engine");

TEST_CASE("parallel_map preserves order for any worker count") {
    std::vector<int> in(1000);
    std::iota(in.begin(), in.end(), 0);
    for (int workers : {1, 2, 5}) {
        WorkerPool pool(workers);
        auto out = parallel_map(pool, std::span<const int>(in), [](int x) { return x * x; });
        REQUIRE(out.size() == in.size());
        for (std::size_t i = 0; i < in.size(); ++i)
            CHECK(out[i] == in[i] * in[i]);
    }
}

TEST_CASE("parallel_blocks covers the range exactly once") {
    WorkerPool pool(4);
    std::vector<std::atomic<int>> hits(997);
    pool.parallel_blocks(hits.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            hits[i]++;
    });
    for (const auto& h : hits)
        CHECK(h.load() == 1);
}

TEST_CASE("exceptions inside tasks propagate to the caller") {
    WorkerPool pool(3);
    CHECK_THROWS_AS(
        pool.parallel_blocks(100,
                             [&](std::size_t, std::size_t begin, std::size_t) {
                                 if (begin > 0)
                                     throw ResourceExceeded("boom");
                             }),
        ResourceExceeded);
    // the pool is still usable afterwards
    std::atomic<int> ran{0};
    pool.parallel_blocks(10, [&](std::size_t, std::size_t b, std::size_t e) {
        ran += static_cast<int>(e - b);
    });
    CHECK(ran.load() == 10);
}

TEST_CASE("parallel_group_by equals sequential grouping on random input") {
    std::mt19937_64 gen(91);
    std::uniform_int_distribution<int> pick_key(0, 40);
    std::vector<std::pair<int, int>> rows; // (key, value)
    for (int i = 0; i < 5000; ++i)
        rows.push_back({pick_key(gen), i});

    // sequential oracle: sum of values and count per key
    std::map<int, std::pair<long, std::size_t>> expected;
    for (const auto& [k, v] : rows) {
        expected[k].first += v;
        expected[k].second += 1;
    }

    for (int workers : {1, 2, 4}) {
        WorkerPool pool(workers);
        auto got = parallel_group_by<int>(
            pool, std::span<const std::pair<int, int>>(rows),
            [](const std::pair<int, int>& r) { return r.first; },
            [](const int&, std::span<const std::pair<int, int>> group) {
                long sum = 0;
                for (const auto& [k, v] : group)
                    sum += v;
                return std::pair<long, std::size_t>(sum, group.size());
            });
        REQUIRE(got.size() == expected.size());
        std::size_t i = 0;
        for (const auto& [k, agg] : expected) {
            CHECK(got[i].first == k); // sorted by key
            CHECK(got[i].second == agg);
            ++i;
        }
    }
}

TEST_CASE("parallel_group_by edge shapes") {
    WorkerPool pool(3);
    std::vector<std::pair<int, int>> empty;
    CHECK(parallel_group_by<int>(
              pool, std::span<const std::pair<int, int>>(empty),
              [](const auto& r) { return r.first; },
              [](const int&, std::span<const std::pair<int, int>> g) { return g.size(); })
              .empty());

    std::vector<std::pair<int, int>> single_group{{7, 1}, {7, 2}, {7, 3}};
    auto got = parallel_group_by<int>(
        pool, std::span<const std::pair<int, int>>(single_group),
        [](const auto& r) { return r.first; },
        [](const int&, std::span<const std::pair<int, int>> g) { return g.size(); });
    REQUIRE(got.size() == 1);
    CHECK(got[0] == std::pair<int, std::size_t>{7, 3});
}

TEST_CASE("group rows keep arrival order within a group") {
    WorkerPool pool(4);
    std::vector<std::pair<int, int>> rows;
    for (int i = 0; i < 200; ++i)
        rows.push_back({i % 5, i});
    auto got = parallel_group_by<int>(
        pool, std::span<const std::pair<int, int>>(rows),
        [](const auto& r) { return r.first; },
        [](const int&, std::span<const std::pair<int, int>> g) {
            std::vector<int> vals;
            for (const auto& [k, v] : g)
                vals.push_back(v);
            return vals;
        });
    for (const auto& [key, vals] : got)
        CHECK(std::is_sorted(vals.begin(), vals.end()));
}

TEST_CASE("run_pipeline outputs are identical across worker counts and modes") {
    auto forest = load_forest(gen_forest(ForestGenConfig{400, 8, 5, 17}));
    TrajectoryGenConfig tcfg;
    tcfg.count = 150;
    tcfg.seed = 17;
    tcfg.plant = PlantSpec{3, 4, 3, 0};
    Dataset ds{forest, gen_trajectories(tcfg, forest)};

    PipelineConfig pc;
    pc.workers = 1;
    auto reference = run_pipeline(ds, pc);
    CHECK(reference.report.mode == "staged");
    CHECK_FALSE(reference.similar.empty());

    for (int workers : {2, 4, 8}) {
        pc.workers = workers;
        auto result = run_pipeline(ds, pc);
        CHECK(result.similar == reference.similar);
        CHECK(result.communities == reference.communities);
        CHECK(result.report.pairs_compared == reference.report.pairs_compared);
        CHECK(result.report.worker_count == workers);
    }

    pc.mode = ExecMode::monolithic;
    auto mono = run_pipeline(ds, pc);
    CHECK(mono.similar == reference.similar);
    CHECK(mono.communities == reference.communities);
    CHECK(mono.report.mode == "monolithic");
    REQUIRE(mono.report.stage_ms.size() == 1);
    CHECK(mono.report.stage_ms[0].first == "monolithic");
}

TEST_CASE("staged packed path and generic candidate path agree") {
    // wide codes force the generic path through the same public pipeline
    ForestSource wide;
    for (int i = 0; i < 40; ++i)
        wide.rows.push_back({"W" + std::to_string(i), {(i % 7) * (1 << 24) + 1, i % 5, i}});
    auto forest = load_forest(wide);

    std::mt19937_64 gen(29);
    std::uniform_int_distribution<std::size_t> pick_place(0, forest.size() - 1);
    std::vector<Trajectory> trajs;
    for (TrajectoryId id = 1; id <= 100; ++id) {
        Trajectory t{id, {}};
        for (int p = 0; p < 7; ++p)
            t.places.push_back(forest.entry(pick_place(gen)).name);
        trajs.push_back(std::move(t));
    }

    // same trajectories through a narrow-coded forest with identical structure
    ForestSource narrow = wide;
    for (auto& [name, codes] : narrow.rows)
        codes[0] = codes[0] / (1 << 24) + 1;
    auto forest2 = load_forest(narrow);

    PipelineConfig pc;
    pc.workers = 2;
    auto wide_result = run_pipeline(Dataset{forest, trajs}, pc);
    auto narrow_result = run_pipeline(Dataset{forest2, trajs}, pc);
    CHECK(wide_result.report.pairs_compared == narrow_result.report.pairs_compared);
    CHECK(wide_result.similar.size() == narrow_result.similar.size());
    CHECK(wide_result.communities == narrow_result.communities);
}

TEST_CASE("pipeline handles 2- through 6-level hierarchies") {
    // places "Lx_y": x picks the coarse path, y varies the leaf
    for (int levels : {2, 3, 4, 5, 6}) {
        ForestSource src;
        for (int x = 0; x < 6; ++x) {
            for (int y = 0; y < 5; ++y) {
                std::vector<Code> codes;
                codes.push_back(x % 3 + 1);
                for (int l = 2; l < levels; ++l)
                    codes.push_back(x / l % 3 + 1);
                codes.push_back(x * 5 + y + 1); // leaf unique across the forest
                src.rows.push_back({"L" + std::to_string(x) + "_" + std::to_string(y), codes});
            }
        }
        auto forest = load_forest(src);
        REQUIRE(forest.levels() == levels);

        std::mt19937_64 gen(31 + levels);
        std::uniform_int_distribution<std::size_t> pick_place(0, forest.size() - 1);
        std::vector<Trajectory> trajs;
        for (TrajectoryId id = 1; id <= 120; ++id) {
            Trajectory t{id, {}};
            for (int p = 0; p < 6; ++p)
                t.places.push_back(forest.entry(pick_place(gen)).name);
            trajs.push_back(std::move(t));
        }
        // near-twins guarantee the ground truth is never empty
        for (TrajectoryId id = 121; id <= 126; ++id) {
            Trajectory t = trajs[id - 121];
            t.id = id;
            t.places[5] = forest.entry(pick_place(gen)).name;
            trajs.push_back(std::move(t));
        }

        PipelineConfig pc;
        pc.sim = SimilarityConfig::defaults(levels);
        pc.sim.threshold = 2.5; // type alphabet is tiny; lower cuts make the graph dense
        pc.workers = 2;
        Dataset ds{forest, trajs};
        auto result = run_pipeline(ds, pc);

        WorkerPool pool(2);
        auto encoded = encode_all(forest, trajs, pool);
        auto truth = centralized_similar(encoded, pc.sim, pc.sim.threshold, pool);
        CHECK_FALSE(truth.empty());
        CHECK(result.similar == truth);

        for (const auto& sp : result.similar) {
            REQUIRE(sp.per_level_matches.size() == static_cast<std::size_t>(levels));
            for (std::size_t h = 1; h < sp.per_level_matches.size(); ++h)
                CHECK(sp.per_level_matches[h] <= sp.per_level_matches[h - 1]);
        }
    }
}

TEST_CASE("unknown places flow through the pipeline without ever matching") {
    auto forest = helpers::demo_forest();
    std::vector<Trajectory> trajs{
        {1, {"Mystery Diner", "KFC", "Sunset Mall", "Mystery Diner", "KFC", "Sunset Mall"}},
        {2, {"Hidden Bar", "KFC", "Sunset Mall", "Hidden Bar", "KFC", "Sunset Mall"}},
        {3, {"Mystery Diner", "Mystery Diner", "Mystery Diner", "Mystery Diner"}},
        {4, {"Mystery Diner", "Mystery Diner", "Mystery Diner", "Mystery Diner"}},
    };
    Dataset ds{forest, trajs};
    PipelineConfig pc;
    pc.sim.threshold = 1.0;
    pc.workers = 2;
    auto result = run_pipeline(ds, pc);

    // 1 and 2 match on the known places only: (KFC, Mall) x2 = 4 per level
    REQUIRE(result.similar.size() == 1);
    CHECK(result.similar[0].id1 == 1);
    CHECK(result.similar[0].id2 == 2);
    CHECK(result.similar[0].per_level_matches == std::vector<std::uint32_t>{4, 4, 4});

    // 3 and 4 are identical strings of unknowns yet never pair, even by oracle
    WorkerPool pool(2);
    auto encoded = encode_all(forest, trajs, pool);
    auto sp = mss(encoded[2], encoded[3], pc.sim);
    CHECK(sp.score == 0.0);
}

TEST_CASE("zipf-skewed data still reproduces the centralized results") {
    auto forest = load_forest(gen_forest(ForestGenConfig{500, 10, 5, 77}));
    TrajectoryGenConfig tcfg;
    tcfg.count = 300;
    tcfg.seed = 77;
    tcfg.zipf_exponent = 1.5; // heavy place reuse -> oversized shingle groups
    Dataset ds{forest, gen_trajectories(tcfg, forest)};

    PipelineConfig pc;
    pc.workers = 2;
    pc.partition.max_group = 16; // force block processing on the hot groups
    auto result = run_pipeline(ds, pc);

    WorkerPool pool(2);
    auto encoded = encode_all(ds.forest, ds.trajectories, pool);
    auto truth = centralized_similar(encoded, pc.sim, pc.sim.threshold, pool);
    CHECK_FALSE(truth.empty());
    CHECK(result.similar == truth);
}

TEST_CASE("empty dataset produces empty outputs without errors") {
    Dataset ds{helpers::demo_forest(), {}};
    PipelineConfig pc;
    pc.workers = 4;
    auto result = run_pipeline(ds, pc);
    CHECK(result.similar.empty());
    CHECK(result.communities.empty());
    CHECK(result.report.pairs_compared == 0);
}

TEST_CASE("pipeline validates inputs") {
    Dataset ds{helpers::demo_forest(), {helpers::carol(1), helpers::carol(1)}};
    PipelineConfig pc;
    CHECK_THROWS_AS(run_pipeline(ds, pc), MalformedInput); // duplicate ids

    Dataset ok{helpers::demo_forest(), {helpers::carol(1), helpers::dave(2)}};
    pc.workers = 0;
    CHECK_THROWS_AS(run_pipeline(ok, pc), InvalidConfig);
    pc.workers = 1;
    pc.sim = SimilarityConfig::defaults(4); // forest has 3 levels
    CHECK_THROWS_AS(run_pipeline(ok, pc), ConfigMismatch);
}

TEST_CASE("memory ceiling surfaces as ResourceExceeded from the pipeline") {
    // 200 trajectories with a guaranteed shared shingle: all pairs collide
    auto forest = load_forest(gen_forest(ForestGenConfig{50, 5, 2, 19}));
    TrajectoryGenConfig tcfg;
    tcfg.count = 200;
    tcfg.seed = 19;
    tcfg.plant = PlantSpec{1, 200, 3, 1};
    Dataset ds{forest, gen_trajectories(tcfg, forest)};

    PipelineConfig pc;
    pc.workers = 2;
    pc.partition.memory_budget_bytes = 2048; // far below C(200,2) pairs
    CHECK_THROWS_AS(run_pipeline(ds, pc), ResourceExceeded);
}

TEST_SUITE_END();

#include "semtraj/community.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>

namespace semtraj {

SimilarityGraph build_graph(std::span<const ScoredPair> similar) {
    SimilarityGraph g;
    g.ids.reserve(similar.size() * 2);
    for (const auto& sp : similar) {
        g.ids.push_back(sp.id1);
        g.ids.push_back(sp.id2);
    }
    std::sort(g.ids.begin(), g.ids.end());
    g.ids.erase(std::unique(g.ids.begin(), g.ids.end()), g.ids.end());

    auto dense = [&](TrajectoryId id) {
        return static_cast<std::uint32_t>(
            std::lower_bound(g.ids.begin(), g.ids.end(), id) - g.ids.begin());
    };

    g.adj.resize(g.ids.size());
    for (const auto& sp : similar) {
        auto [a, b] = canonical_pair(sp.id1, sp.id2);
        g.adj[dense(a)].push_back(dense(b));
        g.adj[dense(b)].push_back(dense(a));
    }
    for (auto& nbrs : g.adj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return g;
}

namespace {

using Vert = std::uint32_t;
using VertSet = std::vector<Vert>; // always sorted

VertSet intersect(const VertSet& a, const VertSet& b) {
    VertSet out;
    out.reserve(std::min(a.size(), b.size()));
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Smallest-last (degeneracy) ordering. Processing outer vertices in this
// order keeps the recursion's candidate sets small.
std::vector<Vert> degeneracy_order(const SimilarityGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::size_t> degree(n);
    std::size_t max_degree = 0;
    for (std::size_t v = 0; v < n; ++v) {
        degree[v] = g.adj[v].size();
        max_degree = std::max(max_degree, degree[v]);
    }
    std::vector<std::vector<Vert>> by_degree(max_degree + 1);
    for (std::size_t v = 0; v < n; ++v)
        by_degree[degree[v]].push_back(static_cast<Vert>(v));

    std::vector<bool> removed(n, false);
    std::vector<Vert> order;
    order.reserve(n);
    std::size_t d = 0;
    while (order.size() < n) {
        while (d <= max_degree && by_degree[d].empty())
            ++d;
        Vert v = by_degree[d].back();
        by_degree[d].pop_back();
        if (removed[v] || degree[v] != d)
            continue; // stale bucket entry; every live vertex sits in its current bucket
        removed[v] = true;
        order.push_back(v);
        for (Vert w : g.adj[v]) {
            if (!removed[w]) {
                --degree[w];
                by_degree[degree[w]].push_back(w);
            }
        }
        if (d > 0)
            --d; // downgraded neighbours land one bucket below at most
    }
    return order;
}

class CliqueEnumerator {
public:
    CliqueEnumerator(const SimilarityGraph& g, const CliqueOptions& opts,
                     std::atomic<std::size_t>& found)
        : g_(g), opts_(opts), found_(found) {}

    std::vector<VertSet>& results() { return results_; }

    void expand(VertSet& r, VertSet p, VertSet x) {
        if (p.empty() && x.empty()) {
            if (r.size() >= opts_.min_size) {
                if (found_.fetch_add(1) + 1 > opts_.max_cliques)
                    throw ResourceExceeded("maximal clique count exceeds ceiling of " +
                                           std::to_string(opts_.max_cliques));
                VertSet clique = r;
                std::sort(clique.begin(), clique.end());
                results_.push_back(std::move(clique));
            }
            return;
        }

        // Pivot on the vertex of P u X with the most neighbours in P; only
        // non-neighbours of the pivot start branches.
        Vert pivot = 0;
        std::size_t best = 0;
        bool have = false;
        for (const VertSet* side : {&p, &x}) {
            for (Vert u : *side) {
                std::size_t cnt = intersect(p, g_.adj[u]).size();
                if (!have || cnt > best) {
                    pivot = u;
                    best = cnt;
                    have = true;
                }
            }
        }

        VertSet branch;
        const auto& pnbrs = g_.adj[pivot];
        std::set_difference(p.begin(), p.end(), pnbrs.begin(), pnbrs.end(),
                            std::back_inserter(branch));
        for (Vert v : branch) {
            r.push_back(v);
            expand(r, intersect(p, g_.adj[v]), intersect(x, g_.adj[v]));
            r.pop_back();
            p.erase(std::lower_bound(p.begin(), p.end(), v));
            auto xi = std::lower_bound(x.begin(), x.end(), v);
            x.insert(xi, v);
        }
    }

private:
    const SimilarityGraph& g_;
    const CliqueOptions& opts_;
    std::atomic<std::size_t>& found_;
    std::vector<VertSet> results_;
};

} // namespace

std::vector<Community> maximal_cliques(const SimilarityGraph& graph, const CliqueOptions& opts,
                                       WorkerPool& pool) {
    const std::size_t n = graph.vertex_count();
    if (n == 0)
        return {};

    std::vector<Vert> order = degeneracy_order(graph);
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i)
        rank[order[i]] = i;

    // Outer branches are independent: vertex v owns the cliques whose
    // earliest member (in degeneracy order) is v.
    std::atomic<std::size_t> found{0};
    std::vector<std::vector<VertSet>> per_branch(n);
    pool.parallel_blocks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Vert v = order[i];
            VertSet p, x;
            for (Vert w : graph.adj[v]) {
                if (rank[w] > i)
                    p.push_back(w);
                else
                    x.push_back(w);
            }
            std::sort(p.begin(), p.end());
            std::sort(x.begin(), x.end());
            CliqueEnumerator en(graph, opts, found);
            VertSet r{v};
            en.expand(r, std::move(p), std::move(x));
            per_branch[i] = std::move(en.results());
        }
    });

    std::vector<Community> out;
    for (auto& branch : per_branch) {
        for (auto& clique : branch) {
            Community c;
            c.members.reserve(clique.size());
            for (Vert v : clique)
                c.members.push_back(graph.ids[v]);
            std::sort(c.members.begin(), c.members.end());
            out.push_back(std::move(c));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Community> maximal_cliques(const SimilarityGraph& graph, const CliqueOptions& opts) {
    WorkerPool pool(1);
    return maximal_cliques(graph, opts, pool);
}

} // namespace semtraj

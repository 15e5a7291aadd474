#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "noderank/graph.hpp"
#include "noderank/ranking.hpp"

namespace noderank {

struct PageRankParams {
    double damping = 0.85;
    double epsilon = 1e-6;
    unsigned max_iter = 200;

    void validate() const;
};

/// Directed link structure over dense indices; link (u, v) passes rank
/// from u to v.
struct LinkGraph {
    std::size_t node_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> links;
};

/// Power iteration of PR(v) = (1 - d)/N + d * sum PR(u)/L(u) over links
/// u -> v. Mass of dangling nodes is spread uniformly. `result.nodes` are
/// the dense indices 0..N-1.
RankResult pagerank(const LinkGraph& graph, const PageRankParams& params, unsigned threads = 1);

/// Runs on a dissemination view. Every receiver votes for the informers
/// it acted on, so each edge informer -> receiver becomes the link
/// receiver -> informer.
RankResult pagerank(const DisseminationGraph& graph, const PageRankParams& params, unsigned threads = 1);

}  // namespace noderank

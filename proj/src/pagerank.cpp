#include "noderank/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "noderank/parallel.hpp"

namespace noderank {

void PageRankParams::validate() const {
    if (!(damping > 0.0 && damping < 1.0)) throw std::invalid_argument("damping must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (max_iter == 0) throw std::invalid_argument("max_iter must be positive");
}

RankResult pagerank(const LinkGraph& graph, const PageRankParams& params, unsigned threads) {
    params.validate();
    const std::size_t n = graph.node_count;
    if (n == 0) throw DataError("empty graph");

    std::vector<std::uint32_t> out_degree(n, 0);
    std::vector<std::uint32_t> in_offsets(n + 1, 0);
    for (const auto& [u, v] : graph.links) {
        if (u >= n || v >= n) throw std::out_of_range("link endpoint out of range");
        ++out_degree[u];
        ++in_offsets[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) in_offsets[i + 1] += in_offsets[i];
    std::vector<std::uint32_t> in_sources(graph.links.size());
    {
        std::vector<std::uint32_t> fill(in_offsets.begin(), in_offsets.end() - 1);
        auto sorted = graph.links;
        std::sort(sorted.begin(), sorted.end());
        for (const auto& [u, v] : sorted) in_sources[fill[v]++] = u;
    }

    const double dn = static_cast<double>(n);
    const double d = params.damping;
    std::vector<double> rank(n, 1.0 / dn);
    std::vector<double> next(n, 0.0);

    RankResult result;
    for (unsigned k = 1; k <= params.max_iter; ++k) {
        double dangling = 0.0;
        for (std::size_t u = 0; u < n; ++u) {
            if (out_degree[u] == 0) dangling += rank[u];
        }
        const double teleport = (1.0 - d) / dn + d * dangling / dn;
        parallel_for_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t v = begin; v < end; ++v) {
                double acc = 0.0;
                for (std::uint32_t k2 = in_offsets[v]; k2 < in_offsets[v + 1]; ++k2) {
                    const std::uint32_t u = in_sources[k2];
                    acc += rank[u] / out_degree[u];
                }
                next[v] = teleport + d * acc;
            }
        });
        double delta = 0.0;
        for (std::size_t v = 0; v < n; ++v) delta += std::abs(next[v] - rank[v]);
        rank.swap(next);
        result.iterations = k;
        result.final_delta = delta;
        result.delta_history.push_back(delta);
        if (delta < params.epsilon) {
            result.converged = true;
            break;
        }
    }

    result.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.nodes[i] = i;
    result.scores = std::move(rank);
    order_by_score(result);
    return result;
}

RankResult pagerank(const DisseminationGraph& graph, const PageRankParams& params, unsigned threads) {
    if (graph.empty()) throw DataError("empty graph");
    LinkGraph links;
    links.node_count = graph.node_count();
    links.links.reserve(graph.edge_count());
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        links.links.emplace_back(graph.receiver_index(e), graph.informer_index(e));
    }
    RankResult result = pagerank(links, params, threads);
    result.nodes.assign(graph.nodes().begin(), graph.nodes().end());
    order_by_score(result);
    return result;
}

}  // namespace noderank

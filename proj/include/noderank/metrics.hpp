#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <json.hpp>

#include "noderank/ranking.hpp"

namespace noderank {

struct RankingShift {
    double mean_abs_shift = 0.0;
    std::map<NodeId, std::int64_t> per_node;  // position in a minus position in b
    std::size_t common = 0;
    std::size_t excluded = 0;  // nodes present in only one ranking
};

/// Mean over common nodes of |position_a - position_b|, 0-based positions.
/// Throws std::invalid_argument when the rankings share no node.
RankingShift ranking_shift(const RankResult& a, const RankResult& b);

/// |top_k(a) ∩ top_k(b)| / k.
double topk_overlap(const RankResult& a, const RankResult& b, std::size_t k);

struct HistogramBin {
    std::int64_t lo = 0;  // inclusive
    std::int64_t hi = 0;  // inclusive
    std::size_t count = 0;
};

/// Equal-width bins over the signed shifts.
std::vector<HistogramBin> shift_histogram(const RankingShift& shift, std::size_t bins = 20);

/// {mean_abs_shift, common_nodes, excluded_nodes, histogram, topk_overlap}
/// with overlaps for each k in `ks` that both rankings can supply.
nlohmann::ordered_json comparison_report(const RankResult& a, const RankResult& b,
                                         std::span<const std::size_t> ks = std::span<const std::size_t>());

}  // namespace noderank

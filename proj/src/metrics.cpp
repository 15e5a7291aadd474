#include "noderank/metrics.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace noderank {

RankingShift ranking_shift(const RankResult& a, const RankResult& b) {
    std::unordered_map<NodeId, std::int64_t> pos_b;
    pos_b.reserve(b.order.size());
    for (std::size_t r = 0; r < b.order.size(); ++r) pos_b.emplace(b.order[r], static_cast<std::int64_t>(r));

    RankingShift shift;
    double total = 0.0;
    for (std::size_t r = 0; r < a.order.size(); ++r) {
        const auto it = pos_b.find(a.order[r]);
        if (it == pos_b.end()) {
            ++shift.excluded;
            continue;
        }
        const std::int64_t delta = static_cast<std::int64_t>(r) - it->second;
        shift.per_node.emplace(a.order[r], delta);
        total += static_cast<double>(delta < 0 ? -delta : delta);
    }
    shift.common = shift.per_node.size();
    shift.excluded += b.order.size() - shift.common;
    if (shift.common == 0) throw std::invalid_argument("rankings share no nodes");
    shift.mean_abs_shift = total / static_cast<double>(shift.common);
    return shift;
}

double topk_overlap(const RankResult& a, const RankResult& b, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (k > a.order.size() || k > b.order.size()) throw std::invalid_argument("k exceeds ranking length");
    const std::unordered_set<NodeId> top_a(a.order.begin(), a.order.begin() + static_cast<std::ptrdiff_t>(k));
    std::size_t hits = 0;
    for (std::size_t r = 0; r < k; ++r) hits += top_a.count(b.order[r]);
    return static_cast<double>(hits) / static_cast<double>(k);
}

std::vector<HistogramBin> shift_histogram(const RankingShift& shift, std::size_t bins) {
    if (shift.per_node.empty() || bins == 0) return {};
    std::int64_t lo = shift.per_node.begin()->second;
    std::int64_t hi = lo;
    for (const auto& [id, s] : shift.per_node) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    const std::int64_t span = hi - lo + 1;
    const auto count = static_cast<std::int64_t>(bins);
    const std::int64_t width = std::max<std::int64_t>(1, (span + count - 1) / count);
    const std::int64_t used = (span + width - 1) / width;
    std::vector<HistogramBin> out(static_cast<std::size_t>(used));
    for (std::int64_t b = 0; b < used; ++b) {
        out[b].lo = lo + b * width;
        out[b].hi = out[b].lo + width - 1;
    }
    for (const auto& [id, s] : shift.per_node) ++out[static_cast<std::size_t>((s - lo) / width)].count;
    return out;
}

nlohmann::ordered_json comparison_report(const RankResult& a, const RankResult& b, std::span<const std::size_t> ks) {
    static constexpr std::array<std::size_t, 3> default_ks{10, 50, 100};
    if (ks.empty()) ks = default_ks;
    const RankingShift shift = ranking_shift(a, b);
    nlohmann::ordered_json j;
    j["mean_abs_shift"] = shift.mean_abs_shift;
    j["common_nodes"] = shift.common;
    j["excluded_nodes"] = shift.excluded;
    auto& hist = j["histogram"] = nlohmann::ordered_json::array();
    for (const auto& bin : shift_histogram(shift)) {
        hist.push_back({{"lo", bin.lo}, {"hi", bin.hi}, {"count", bin.count}});
    }
    auto& overlap = j["topk_overlap"] = nlohmann::ordered_json::object();
    for (const std::size_t k : ks) {
        if (k == 0 || k > a.order.size() || k > b.order.size()) continue;
        overlap[std::to_string(k)] = topk_overlap(a, b, k);
    }
    return j;
}

}  // namespace noderank

#include "noderank/ranking.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "noderank/io.hpp"

namespace noderank {

std::optional<double> RankResult::score_of(NodeId id) const {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
    if (it == nodes.end() || *it != id) return std::nullopt;
    return scores[static_cast<std::size_t>(it - nodes.begin())];
}

std::vector<std::size_t> RankResult::positions() const {
    std::vector<std::size_t> pos(nodes.size(), 0);
    for (std::size_t r = 0; r < order.size(); ++r) {
        const auto it = std::lower_bound(nodes.begin(), nodes.end(), order[r]);
        pos[static_cast<std::size_t>(it - nodes.begin())] = r;
    }
    return pos;
}

std::vector<NodeId> RankResult::top(std::size_t k) const {
    k = std::min(k, order.size());
    return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)};
}

void order_by_score(RankResult& result) {
    std::vector<std::size_t> idx(result.nodes.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (result.scores[a] != result.scores[b]) return result.scores[a] > result.scores[b];
        return result.nodes[a] < result.nodes[b];
    });
    result.order.clear();
    result.order.reserve(idx.size());
    for (const auto i : idx) result.order.push_back(result.nodes[i]);
}

void write_rank_csv(std::ostream& out, const RankResult& result) {
    out << "node_id,score,rank\n";
    for (std::size_t r = 0; r < result.order.size(); ++r) {
        const NodeId id = result.order[r];
        out << id << ',' << io::format_real(*result.score_of(id), 12) << ',' << (r + 1) << '\n';
    }
}

std::string rank_csv_text(const RankResult& result) {
    std::ostringstream out;
    write_rank_csv(out, result);
    return out.str();
}

RankResult read_rank_csv(std::istream& in) {
    struct Row {
        NodeId id;
        double score;
        std::size_t rank;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (number == 1 && line.rfind("node_id", 0) == 0) continue;
        std::istringstream fields(line);
        Row row{};
        char c1 = 0;
        char c2 = 0;
        if (!(fields >> row.id >> c1 >> row.score >> c2 >> row.rank) || c1 != ',' || c2 != ',') {
            throw DataError("malformed rank row at line " + std::to_string(number));
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw DataError("rank file has no rows");
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.rank < b.rank; });
    RankResult result;
    for (const auto& r : rows) result.order.push_back(r.id);
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].id == rows[i - 1].id) {
            throw DataError("duplicate node " + std::to_string(rows[i].id) + " in rank file");
        }
        result.nodes.push_back(rows[i].id);
        result.scores.push_back(rows[i].score);
    }
    return result;
}

std::string convergence_log(const RankResult& result, double epsilon) {
    std::ostringstream out;
    for (std::size_t k = 0; k < result.delta_history.size(); ++k) {
        out << "iteration " << (k + 1) << " delta " << io::format_real(result.delta_history[k], 12) << '\n';
    }
    if (result.converged) {
        out << "converged after " << result.iterations << " iterations: delta "
            << io::format_real(result.final_delta, 12) << " < " << io::format_real(epsilon, 6) << '\n';
    } else {
        out << "max_iter reached after " << result.iterations << " iterations: delta "
            << io::format_real(result.final_delta, 12) << '\n';
    }
    return out.str();
}

}  // namespace noderank

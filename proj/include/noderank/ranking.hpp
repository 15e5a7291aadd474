#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "noderank/graph.hpp"

namespace noderank {

/// Scores of one ranking run. `nodes` and `scores` are aligned and sorted
/// by id; `order` is descending by score with ties by ascending id.
struct RankResult {
    std::vector<NodeId> nodes;
    std::vector<double> scores;
    std::vector<NodeId> order;
    std::size_t iterations = 0;
    bool converged = false;
    double final_delta = 0.0;
    std::vector<double> delta_history;

    std::optional<double> score_of(NodeId id) const;
    /// 0-based position of every node in `order`, aligned with `nodes`.
    std::vector<std::size_t> positions() const;
    std::vector<NodeId> top(std::size_t k) const;
};

/// Fills `order` from `nodes` / `scores`.
void order_by_score(RankResult& result);

/// `node_id,score,rank` with 12 significant digits; rank is 1-based.
void write_rank_csv(std::ostream& out, const RankResult& result);
std::string rank_csv_text(const RankResult& result);

/// Parses a rank CSV. Scores and order come back; convergence fields are
/// left at their defaults. Throws DataError on malformed rows.
RankResult read_rank_csv(std::istream& in);

/// One line per iteration plus a final status line.
std::string convergence_log(const RankResult& result, double epsilon);

}  // namespace noderank

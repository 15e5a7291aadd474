#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "noderank/graph.hpp"

namespace noderank {

/// Simple undirected graph used as the walk substrate. Neighbor lists are
/// sorted and unique; nodes are addressed by dense index like
/// DisseminationGraph.
class UndirectedGraph {
public:
    UndirectedGraph() = default;
    UndirectedGraph(std::span<const std::pair<NodeId, NodeId>> edges, std::span<const NodeId> extra_nodes = {});

    static UndirectedGraph from(const DisseminationGraph& graph);
    static UndirectedGraph from(const RelationalGraph& graph);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::span<const NodeId> nodes() const noexcept { return nodes_; }
    std::span<const std::uint32_t> neighbors(std::size_t node) const;
    bool adjacent(std::size_t a, std::size_t b) const;

private:
    std::vector<NodeId> nodes_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> adjacency_;
};

struct Node2VecParams {
    double p = 1.0;               // return bias
    double q = 1.0;               // in-out bias
    unsigned walk_length = 80;    // nodes per walk
    unsigned walks_per_node = 10;
    unsigned window = 10;
    unsigned negatives = 5;
    unsigned epochs = 5;
    double learning_rate = 0.025; // decays linearly to 1e-4 of the start value
    unsigned dim = 64;
    std::uint64_t rng_seed = 1;

    /// Throws std::invalid_argument on a non-positive field.
    void validate() const;
};

/// Walks over dense node indices of `vocabulary`, stored back to back.
struct WalkCorpus {
    std::vector<NodeId> vocabulary;
    std::vector<std::uint32_t> tokens;
    std::vector<std::size_t> offsets{0};

    std::size_t walk_count() const noexcept { return offsets.size() - 1; }
    std::span<const std::uint32_t> walk(std::size_t i) const {
        return std::span<const std::uint32_t>(tokens).subspan(offsets[i], offsets[i + 1] - offsets[i]);
    }
    std::vector<NodeId> walk_ids(std::size_t i) const;
    void append(std::span<const std::uint32_t> walk);
};

/// Second-order biased walks. Walk r of start node v is walk index
/// r * node_count + v and draws from its own stream, so the corpus does not
/// depend on `threads`.
WalkCorpus generate_walks(const UndirectedGraph& graph, const Node2VecParams& params, unsigned threads = 1);

class EmbeddingTable {
public:
    EmbeddingTable() = default;
    /// `ids` sorted ascending, `values` row-major ids.size() x dim.
    EmbeddingTable(std::vector<NodeId> ids, unsigned dim, std::vector<float> values);

    unsigned dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return ids_.size(); }
    std::span<const NodeId> ids() const noexcept { return ids_; }
    bool contains(NodeId id) const;
    /// Throws std::out_of_range for unknown ids.
    std::span<const float> vector(NodeId id) const;
    std::span<const float> row(std::size_t index) const {
        return std::span<const float>(values_).subspan(index * dim_, dim_);
    }
    std::span<const float> values() const noexcept { return values_; }

    friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

private:
    std::vector<NodeId> ids_;
    unsigned dim_ = 0;
    std::vector<float> values_;
};

/// Skip-gram with negative sampling over the corpus. threads == 1 is the
/// deterministic mode; more threads run lock-free (Hogwild-style) updates
/// whose result is only statistically reproducible.
EmbeddingTable train_sgns(const WalkCorpus& corpus, const Node2VecParams& params, unsigned threads = 1);

double cosine(std::span<const double> u, std::span<const double> v);
double cosine(std::span<const float> u, std::span<const float> v);

inline constexpr double kIntimacyFloor = 0.01;

/// Cosine of the two embeddings, floored at kIntimacyFloor.
double intimacy(NodeId u, NodeId v, const EmbeddingTable& table);

void save_embeddings(std::ostream& out, const EmbeddingTable& table);
std::string embeddings_text(const EmbeddingTable& table);
EmbeddingTable load_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

}  // namespace noderank

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace noderank {

/// Dataset-native user id.
using NodeId = std::uint64_t;

/// Seconds since the epoch.
using Timestamp = std::int64_t;

enum class ActionKind : std::uint8_t { Retweet, Reply, Mention, Other };

/// Maps "RT" / "RE" / "MT" to the matching kind; anything else is Other.
ActionKind parse_action_token(std::string_view token) noexcept;

/// Canonical token: RT, RE, MT or OT.
std::string_view action_token(ActionKind kind) noexcept;

/// Lower number means stronger commitment (Retweet first).
int action_priority(ActionKind kind) noexcept;

enum class View : std::uint8_t { Retweet, Reply, Mention, Mixed };

std::string_view view_name(View view) noexcept;
std::optional<View> parse_view(std::string_view name) noexcept;

/// True when an edge of this kind belongs to the view.
bool view_accepts(View view, ActionKind kind) noexcept;

struct TemporalEdge {
    NodeId informer = 0;
    NodeId receiver = 0;
    Timestamp timestamp = 0;
    ActionKind action = ActionKind::Other;

    friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

/// Errors raised for malformed or unusable input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Diagnostic {
    std::size_t line = 0;  // 1-based; 0 for stream-level warnings
    std::string message;
};

struct ActivityParse {
    std::vector<TemporalEdge> edges;
    std::vector<Diagnostic> diagnostics;
    std::size_t lines_read = 0;
    std::size_t self_loops = 0;
    std::size_t malformed = 0;
    std::size_t unknown_actions = 0;
};

/// Reads `userA userB timestamp action` lines. The Higgs convention is that
/// A acted on B's content, so the information flowed B -> A: informer = B.
ActivityParse parse_activity(std::istream& in);
ActivityParse parse_activity(std::string_view text);

/// Static follower graph; `userA userB` means A follows B.
class RelationalGraph {
public:
    RelationalGraph() = default;

    /// Builds from (follower, followee) pairs; duplicates collapse.
    explicit RelationalGraph(std::vector<std::pair<NodeId, NodeId>> edges);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return targets_.size(); }
    std::span<const NodeId> nodes() const noexcept { return nodes_; }

    /// Sorted list of accounts `follower` follows; empty for unknown ids.
    std::span<const NodeId> followees(NodeId follower) const;

    /// All (follower, followee) pairs, sorted.
    std::vector<std::pair<NodeId, NodeId>> edge_list() const;

private:
    std::vector<NodeId> nodes_;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
};

struct SocialParse {
    RelationalGraph graph;
    std::vector<Diagnostic> diagnostics;
    std::size_t lines_read = 0;
    std::size_t malformed = 0;
    std::size_t self_loops = 0;
};

SocialParse parse_social(std::istream& in);
SocialParse parse_social(std::string_view text);

/// Keeps the earliest edge per ordered (informer, receiver) pair. Equal
/// timestamps resolve by action priority. Output is in canonical order.
std::vector<TemporalEdge> dedup_earliest(std::span<const TemporalEdge> edges);

/// Canonical edge order: (timestamp, informer, receiver), then action priority.
bool canonical_less(const TemporalEdge& a, const TemporalEdge& b) noexcept;

/// Immutable temporal dissemination graph of one view.
///
/// Nodes are stored sorted by id and addressed internally by a dense index
/// in [0, node_count). Edges are held in canonical order; `out_edges(i)`
/// lists edges where node i is the informer and `in_edges(i)` those where it
/// is the receiver. At most one edge exists per ordered pair; self-loops are
/// rejected.
class DisseminationGraph {
public:
    DisseminationGraph() = default;

    /// Node set is the union of edge endpoints plus `extra_nodes`.
    DisseminationGraph(std::vector<TemporalEdge> edges, View view,
                       std::span<const NodeId> extra_nodes = {});

    View view() const noexcept { return view_; }
    /// Minimum edge timestamp; 0 for an edgeless graph.
    Timestamp t0() const noexcept { return t0_; }
    Timestamp max_timestamp() const noexcept { return t_max_; }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    std::span<const NodeId> nodes() const noexcept { return nodes_; }
    std::span<const TemporalEdge> edges() const noexcept { return edges_; }
    NodeId node(std::size_t index) const { return nodes_.at(index); }
    std::optional<std::size_t> index_of(NodeId id) const;
    bool contains(NodeId id) const { return index_of(id).has_value(); }

    /// Dense endpoint indices of edge e.
    std::uint32_t informer_index(std::size_t e) const { return src_[e]; }
    std::uint32_t receiver_index(std::size_t e) const { return dst_[e]; }

    std::span<const std::uint32_t> out_edges(std::size_t node) const;
    std::span<const std::uint32_t> in_edges(std::size_t node) const;

private:
    View view_ = View::Mixed;
    Timestamp t0_ = 0;
    Timestamp t_max_ = 0;
    std::vector<NodeId> nodes_;
    std::vector<TemporalEdge> edges_;
    std::vector<std::uint32_t> src_;
    std::vector<std::uint32_t> dst_;
    std::vector<std::uint32_t> out_offsets_;
    std::vector<std::uint32_t> out_list_;
    std::vector<std::uint32_t> in_offsets_;
    std::vector<std::uint32_t> in_list_;
};

/// Filters `edges` to the view, deduplicates (across all kinds for Mixed)
/// and builds the graph. Throws DataError when nothing survives.
DisseminationGraph build_view(std::span<const TemporalEdge> edges, View view);

/// Dense-index strongly connected components, each sorted ascending.
/// Iterative Tarjan; safe on arbitrarily deep graphs.
std::vector<std::vector<std::uint32_t>> strongly_connected_components(const DisseminationGraph& graph);

/// Induced subgraph of the largest SCC. Ties go to the component holding
/// the smallest NodeId. Throws DataError on an empty graph.
DisseminationGraph largest_scc(const DisseminationGraph& graph);

/// True when every node reaches, and is reached from, node 0 (BFS both ways).
bool is_strongly_connected(const DisseminationGraph& graph);

/// `informer,receiver,timestamp,action` per line in canonical order.
void write_canonical_edges(std::ostream& out, std::span<const TemporalEdge> edges);
std::string canonical_edges_text(std::span<const TemporalEdge> edges);

/// Parses the canonical format. Throws DataError with the line number on
/// malformed input.
std::vector<TemporalEdge> read_canonical_edges(std::istream& in);

/// View implied by an edge list: the single kind present, else Mixed.
View infer_view(std::span<const TemporalEdge> edges) noexcept;

}  // namespace noderank

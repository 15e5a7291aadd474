#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "noderank/embedding.hpp"
#include "noderank/graph.hpp"
#include "noderank/ranking.hpp"

namespace noderank {

struct ActionWeights {
    double retweet = 1.0;
    double reply = 0.8;
    double mention = 0.4;
    double other = 0.6;

    double of(ActionKind kind) const noexcept;
    static ActionWeights uniform(double w = 1.0) noexcept { return {w, w, w, w}; }
    friend bool operator==(const ActionWeights&, const ActionWeights&) = default;
};

/// Mixed views use the graded table; single-action views weigh every
/// action 1.0.
ActionWeights default_action_weights(View view) noexcept;

enum class Schedule { Jacobi, GaussSeidel };

struct NodeRankParams {
    double damping = 0.85;
    double epsilon = 1e-6;
    unsigned max_iter = 200;
    std::chrono::seconds beta = std::chrono::minutes(360);
    ActionWeights action_weights{};
    bool use_action = true;
    bool use_intimacy = true;
    Schedule schedule = Schedule::Jacobi;

    /// Throws std::invalid_argument outside the documented domains.
    void validate() const;
};

/// floor((t - t0) / beta). Throws std::invalid_argument when t < t0.
std::int64_t normalize_timestamp(Timestamp t, Timestamp t0, std::chrono::seconds beta);

/// Intimacy of (informer, node); values are used as given.
using IntimacyFn = std::function<double(NodeId informer, NodeId node)>;

/// A node that the focal node received content from.
struct Informer {
    NodeId id = 0;
    std::uint32_t index = 0;        // dense graph index
    std::int64_t arrival_slot = 0;
    ActionKind action = ActionKind::Other;
    double factor = 1.0;            // action weight x intimacy
};

/// A node that acted on the focal node's content in slot `slots[slot_pos]`.
struct Broadcast {
    std::uint32_t slot_pos = 0;
    std::uint32_t broadcaster = 0;   // dense graph index
    std::uint32_t informer_pos = 0;  // position of the focal node in the broadcaster's informer list
};

using TimeSlots = std::vector<std::int64_t>;

/// Per-node tables. F is row-major, informers x slots.
struct NodeState {
    NodeId id = 0;
    std::vector<Informer> informers;
    TimeSlots slots;
    std::vector<double> F;
    std::vector<double> P;
    std::vector<double> O;
    std::vector<Broadcast> broadcasters;  // sorted by slot_pos
    double baseline = 0.0;                // (1 - d) / (|N| * L), 0 when L == 0

    std::size_t informer_count() const noexcept { return informers.size(); }
    std::size_t slot_count() const noexcept { return slots.size(); }
    double f(std::size_t informer, std::size_t slot) const { return F[informer * slots.size() + slot]; }
    /// Number of informers that arrived by slot position q.
    std::size_t informers_known_at(std::size_t q) const;
};

/// Vote propagation over a dissemination graph.
///
/// Each sweep first refreshes every node's collection vector from the
/// offering vectors of its broadcasters, then recomputes every offering
/// vector as baseline + d * F * P. Under the Jacobi schedule the two phases
/// are separated, so a sweep reads only the previous sweep's offers and the
/// result is independent of the thread count. The Gauss-Seidel schedule
/// visits nodes in id order and updates each in place.
class NodeRankModel {
public:
    NodeRankModel(const DisseminationGraph& graph, const NodeRankParams& params, const IntimacyFn* intimacy);

    const DisseminationGraph& graph() const noexcept { return *graph_; }
    const NodeRankParams& params() const noexcept { return params_; }
    std::span<const NodeState> states() const noexcept { return states_; }
    const NodeState& state(std::size_t index) const { return states_.at(index); }
    const NodeState& state_of(NodeId id) const;

    /// New collection vector of node i from the current offers.
    std::vector<double> collect(std::size_t i) const;
    /// New offering vector of node i from its current collection vector.
    std::vector<double> distribute(std::size_t i) const;
    double score(std::size_t i) const;

    void apply_collect(std::size_t i) { states_[i].P = collect(i); }
    void apply_distribute(std::size_t i) { states_[i].O = distribute(i); }
    void set_offer(std::size_t i, std::size_t informer, double value) { states_.at(i).O.at(informer) = value; }

    /// Sweeps until the L1 change of the score vector drops below epsilon
    /// or max_iter sweeps ran.
    RankResult iterate(unsigned threads = 1);

private:
    const DisseminationGraph* graph_;
    NodeRankParams params_;
    std::vector<NodeState> states_;
};

NodeRankModel build_states(const DisseminationGraph& graph, const IntimacyFn* intimacy, const NodeRankParams& params);

enum class Variant { NR, NR_A, NR_I, NR_AI };

std::string_view variant_name(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view name) noexcept;
bool variant_uses_intimacy(Variant v) noexcept;
bool variant_uses_action(Variant v) noexcept;

/// NR uses both factors, NR-A drops the action factor, NR-I drops
/// intimacy, NR-AI drops both. Throws std::invalid_argument when the
/// variant needs embeddings and none are given.
RankResult run_variant(const DisseminationGraph& graph, const EmbeddingTable* embeddings, Variant variant,
                       NodeRankParams params, unsigned threads = 1);

}  // namespace noderank

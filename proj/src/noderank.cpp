#include "noderank/noderank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "noderank/parallel.hpp"

namespace noderank {

double ActionWeights::of(ActionKind kind) const noexcept {
    switch (kind) {
        case ActionKind::Retweet: return retweet;
        case ActionKind::Reply: return reply;
        case ActionKind::Mention: return mention;
        case ActionKind::Other: break;
    }
    return other;
}

ActionWeights default_action_weights(View view) noexcept {
    if (view == View::Mixed) return ActionWeights{};
    return ActionWeights::uniform(1.0);
}

void NodeRankParams::validate() const {
    if (!(damping > 0.0 && damping < 1.0)) throw std::invalid_argument("damping must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (max_iter == 0) throw std::invalid_argument("max_iter must be positive");
    if (beta.count() <= 0) throw std::invalid_argument("beta must be positive");
    for (const double w : {action_weights.retweet, action_weights.reply, action_weights.mention, action_weights.other}) {
        if (!(w > 0.0 && w <= 1.0)) throw std::invalid_argument("action weights must lie in (0, 1]");
    }
}

std::int64_t normalize_timestamp(Timestamp t, Timestamp t0, std::chrono::seconds beta) {
    if (t < t0) throw std::invalid_argument("timestamp precedes the view origin");
    if (beta.count() <= 0) throw std::invalid_argument("beta must be positive");
    return (t - t0) / beta.count();
}

std::size_t NodeState::informers_known_at(std::size_t q) const {
    const std::int64_t slot = slots[q];
    return static_cast<std::size_t>(std::count_if(informers.begin(), informers.end(),
                                                  [slot](const Informer& p) { return p.arrival_slot <= slot; }));
}

// ---------------------------------------------------------------------------

NodeRankModel::NodeRankModel(const DisseminationGraph& graph, const NodeRankParams& params,
                             const IntimacyFn* intimacy)
    : graph_(&graph), params_(params) {
    params_.validate();
    if (params_.use_intimacy && intimacy == nullptr) {
        throw std::invalid_argument("intimacy factor enabled but no intimacy source given");
    }
    const std::size_t n = graph.node_count();
    if (n == 0) throw std::invalid_argument("empty graph");
    const double node_total = static_cast<double>(n);

    auto slot_of = [&](std::size_t e) {
        return normalize_timestamp(graph.edges()[e].timestamp, graph.t0(), params_.beta);
    };

    states_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        NodeState& s = states_[i];
        s.id = graph.node(i);
        if (graph.in_edges(i).empty() && graph.out_edges(i).empty()) {
            throw std::invalid_argument("node " + std::to_string(s.id) + " has no edges in the view");
        }
        for (const auto e : graph.in_edges(i)) {
            const auto& edge = graph.edges()[e];
            Informer p;
            p.id = edge.informer;
            p.index = graph.informer_index(e);
            p.arrival_slot = slot_of(e);
            p.action = edge.action;
            const double omega = params_.use_action ? params_.action_weights.of(edge.action) : 1.0;
            const double mu = params_.use_intimacy ? (*intimacy)(edge.informer, s.id) : 1.0;
            p.factor = omega * mu;
            s.informers.push_back(p);
            s.slots.push_back(p.arrival_slot);
        }
        std::sort(s.informers.begin(), s.informers.end(), [](const Informer& a, const Informer& b) {
            return a.arrival_slot != b.arrival_slot ? a.arrival_slot < b.arrival_slot : a.id < b.id;
        });
        for (const auto e : graph.out_edges(i)) s.slots.push_back(slot_of(e));
        std::sort(s.slots.begin(), s.slots.end());
        s.slots.erase(std::unique(s.slots.begin(), s.slots.end()), s.slots.end());

        const std::size_t L = s.informers.size();
        s.baseline = L == 0 ? 0.0 : (1.0 - params_.damping) / (node_total * static_cast<double>(L));
        s.O.assign(L, s.baseline);
        s.P.assign(s.slots.size(), 0.0);
        s.F.assign(L * s.slots.size(), 0.0);
    }

    // Broadcasters need every informer list in place.
    for (std::size_t i = 0; i < n; ++i) {
        NodeState& s = states_[i];
        for (const auto e : graph.out_edges(i)) {
            const std::uint32_t j = graph.receiver_index(e);
            const auto& informers = states_[j].informers;
            const auto it = std::find_if(informers.begin(), informers.end(),
                                         [i](const Informer& p) { return p.index == i; });
            const std::int64_t slot = slot_of(e);
            Broadcast b;
            b.slot_pos = static_cast<std::uint32_t>(std::lower_bound(s.slots.begin(), s.slots.end(), slot) - s.slots.begin());
            b.broadcaster = j;
            b.informer_pos = static_cast<std::uint32_t>(it - informers.begin());
            s.broadcasters.push_back(b);
        }
        std::sort(s.broadcasters.begin(), s.broadcasters.end(), [](const Broadcast& a, const Broadcast& b) {
            return a.slot_pos != b.slot_pos ? a.slot_pos < b.slot_pos : a.broadcaster < b.broadcaster;
        });

        const std::size_t M = s.slots.size();
        std::vector<char> has_broadcaster(M, 0);
        for (const auto& b : s.broadcasters) has_broadcaster[b.slot_pos] = 1;
        for (std::size_t q = 0; q < M; ++q) {
            if (!has_broadcaster[q]) continue;
            const std::size_t known = s.informers_known_at(q);
            if (known == 0) continue;
            for (std::size_t p = 0; p < s.informers.size(); ++p) {
                if (s.informers[p].arrival_slot <= s.slots[q]) {
                    s.F[p * M + q] = s.informers[p].factor / static_cast<double>(known);
                }
            }
        }
    }
}

const NodeState& NodeRankModel::state_of(NodeId id) const {
    const auto idx = graph_->index_of(id);
    if (!idx) throw std::out_of_range("node " + std::to_string(id) + " not in graph");
    return states_[*idx];
}

std::vector<double> NodeRankModel::collect(std::size_t i) const {
    const NodeState& s = states_[i];
    std::vector<double> P(s.slots.size(), 0.0);
    for (const auto& b : s.broadcasters) {
        P[b.slot_pos] += states_[b.broadcaster].O[b.informer_pos];
    }
    return P;
}

std::vector<double> NodeRankModel::distribute(std::size_t i) const {
    const NodeState& s = states_[i];
    const std::size_t L = s.informers.size();
    const std::size_t M = s.slots.size();
    std::vector<double> O(L, s.baseline);
    for (std::size_t p = 0; p < L; ++p) {
        double acc = 0.0;
        for (std::size_t q = 0; q < M; ++q) acc += s.F[p * M + q] * s.P[q];
        O[p] += params_.damping * acc;
    }
    return O;
}

double NodeRankModel::score(std::size_t i) const {
    double total = 0.0;
    for (const double x : states_[i].P) total += x;
    return total;
}

RankResult NodeRankModel::iterate(unsigned threads) {
    const std::size_t n = states_.size();
    std::vector<double> previous(n, 0.0);
    std::vector<double> current(n, 0.0);

    RankResult result;
    result.nodes.assign(graph_->nodes().begin(), graph_->nodes().end());

    for (unsigned k = 1; k <= params_.max_iter; ++k) {
        if (params_.schedule == Schedule::Jacobi) {
            parallel_for_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
                for (std::size_t i = begin; i < end; ++i) {
                    apply_collect(i);
                    current[i] = score(i);
                }
            });
            parallel_for_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
                for (std::size_t i = begin; i < end; ++i) apply_distribute(i);
            });
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                apply_collect(i);
                current[i] = score(i);
                apply_distribute(i);
            }
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta += std::abs(current[i] - previous[i]);
        previous.swap(current);
        result.iterations = k;
        result.final_delta = delta;
        result.delta_history.push_back(delta);
        if (delta < params_.epsilon) {
            result.converged = true;
            break;
        }
    }
    result.scores = previous;
    order_by_score(result);
    return result;
}

NodeRankModel build_states(const DisseminationGraph& graph, const IntimacyFn* intimacy, const NodeRankParams& params) {
    return NodeRankModel(graph, params, intimacy);
}

// ---------------------------------------------------------------------------

std::string_view variant_name(Variant v) noexcept {
    switch (v) {
        case Variant::NR: return "NR";
        case Variant::NR_A: return "NR-A";
        case Variant::NR_I: return "NR-I";
        case Variant::NR_AI: break;
    }
    return "NR-AI";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
    if (name == "NR") return Variant::NR;
    if (name == "NR-A" || name == "NR_A") return Variant::NR_A;
    if (name == "NR-I" || name == "NR_I") return Variant::NR_I;
    if (name == "NR-AI" || name == "NR_AI") return Variant::NR_AI;
    return std::nullopt;
}

bool variant_uses_intimacy(Variant v) noexcept { return v == Variant::NR || v == Variant::NR_A; }
bool variant_uses_action(Variant v) noexcept { return v == Variant::NR || v == Variant::NR_I; }

RankResult run_variant(const DisseminationGraph& graph, const EmbeddingTable* embeddings, Variant variant,
                       NodeRankParams params, unsigned threads) {
    params.use_action = variant_uses_action(variant);
    params.use_intimacy = variant_uses_intimacy(variant);
    if (!params.use_intimacy) {
        return NodeRankModel(graph, params, nullptr).iterate(threads);
    }
    if (embeddings == nullptr) {
        throw std::invalid_argument(std::string(variant_name(variant)) + " requires node embeddings");
    }
    const IntimacyFn fn = [embeddings](NodeId a, NodeId b) { return intimacy(a, b, *embeddings); };
    return NodeRankModel(graph, params, &fn).iterate(threads);
}

}  // namespace noderank

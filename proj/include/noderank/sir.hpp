#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "noderank/graph.hpp"
#include "noderank/ranking.hpp"
#include "noderank/rng.hpp"

namespace noderank {

/// Cumulative: an edge stays active from its slot on. Exact: an edge is
/// active only during the step equal to its slot.
enum class SirMode { Cumulative, Exact };

struct SirParams {
    double p_infect = 0.05;
    double p_recover = 0.1;
    std::size_t seed_count = 50;
    std::size_t trials = 100;
    std::optional<std::size_t> horizon;  // default 2 * max_slot + 50
    std::uint64_t rng_seed = 1;
    SirMode mode = SirMode::Cumulative;
    std::chrono::seconds beta = std::chrono::minutes(360);

    void validate() const;
};

struct SirCounts {
    std::size_t susceptible = 0;
    std::size_t infected = 0;
    std::size_t recovered = 0;

    friend bool operator==(const SirCounts&, const SirCounts&) = default;
};

struct SirTrace {
    std::vector<SirCounts> steps;  // steps[0] is the seeded state
    std::size_t final_reached = 0;

    friend bool operator==(const SirTrace&, const SirTrace&) = default;
};

/// Out-edges per node ordered by slot, prepared once per graph.
class SirNetwork {
public:
    SirNetwork(const DisseminationGraph& graph, std::chrono::seconds beta);

    const DisseminationGraph& graph() const noexcept { return *graph_; }
    std::int64_t max_slot() const noexcept { return max_slot_; }
    std::size_t default_horizon() const noexcept { return static_cast<std::size_t>(2 * max_slot_ + 50); }

    struct Arc {
        std::int64_t slot;
        std::uint32_t target;
    };
    std::span<const Arc> arcs(std::size_t node) const {
        return std::span<const Arc>(arcs_).subspan(offsets_[node], offsets_[node + 1] - offsets_[node]);
    }

private:
    const DisseminationGraph* graph_;
    std::int64_t max_slot_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<Arc> arcs_;
};

/// One discrete-time trial. Each step every infected node tries each
/// susceptible out-neighbor over the active edges, then recovers with
/// p_recover. The trace always has horizon + 1 entries.
SirTrace run_trial(const SirNetwork& network, std::span<const NodeId> seeds, const SirParams& params, Rng& rng);
SirTrace run_trial(const DisseminationGraph& graph, std::span<const NodeId> seeds, const SirParams& params, Rng& rng);

/// Top-k of the ranking restricted to graph nodes.
std::vector<NodeId> select_seeds(const RankResult& ranking, const DisseminationGraph& graph, std::size_t k);

struct MeanCurve {
    std::vector<double> susceptible;
    std::vector<double> infected;
    std::vector<double> recovered;
};

struct MethodOutcome {
    std::string label;
    std::vector<NodeId> seeds;
    std::vector<SirTrace> traces;
    MeanCurve mean;
    std::vector<std::size_t> finals;
    double mean_final = 0.0;
};

struct SeedComparison {
    MethodOutcome a;
    MethodOutcome b;
    double ratio = 0.0;  // mean_final(a) / mean_final(b)
    std::size_t horizon = 0;
    std::size_t population = 0;
    SirParams params;
};

/// Runs params.trials trials per method. Trial t of both methods draws from
/// the same stream derive_seed(rng_seed, "sir/trial", t).
SeedComparison evaluate_seeds(const DisseminationGraph& graph, const RankResult& rank_a, const RankResult& rank_b,
                              const SirParams& params, unsigned threads = 1, std::string label_a = "A",
                              std::string label_b = "B");

MeanCurve mean_curve(std::span<const SirTrace> traces);

std::string trace_csv(const SirTrace& trace);
std::string mean_trace_csv(const MeanCurve& curve);
nlohmann::ordered_json comparison_json(const SeedComparison& comparison);

}  // namespace noderank

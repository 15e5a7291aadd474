#include "noderank/sir.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "noderank/io.hpp"
#include "noderank/noderank.hpp"
#include "noderank/parallel.hpp"

namespace noderank {

void SirParams::validate() const {
    if (!(p_infect >= 0.0 && p_infect <= 1.0)) throw std::invalid_argument("p_infect must lie in [0, 1]");
    if (!(p_recover >= 0.0 && p_recover <= 1.0)) throw std::invalid_argument("p_recover must lie in [0, 1]");
    if (seed_count == 0) throw std::invalid_argument("seed_count must be positive");
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    if (beta.count() <= 0) throw std::invalid_argument("beta must be positive");
}

SirNetwork::SirNetwork(const DisseminationGraph& graph, std::chrono::seconds beta) : graph_(&graph) {
    const std::size_t n = graph.node_count();
    offsets_.assign(n + 1, 0);
    arcs_.reserve(graph.edge_count());
    for (std::size_t i = 0; i < n; ++i) {
        offsets_[i] = arcs_.size();
        const std::size_t first = arcs_.size();
        for (const auto e : graph.out_edges(i)) {
            const std::int64_t slot = normalize_timestamp(graph.edges()[e].timestamp, graph.t0(), beta);
            max_slot_ = std::max(max_slot_, slot);
            arcs_.push_back({slot, graph.receiver_index(e)});
        }
        std::sort(arcs_.begin() + static_cast<std::ptrdiff_t>(first), arcs_.end(), [](const Arc& a, const Arc& b) {
            return a.slot != b.slot ? a.slot < b.slot : a.target < b.target;
        });
    }
    offsets_[n] = arcs_.size();
}

namespace {

enum : std::uint8_t { kSusceptible = 0, kInfected = 1, kRecovered = 2 };

}  // namespace

SirTrace run_trial(const SirNetwork& network, std::span<const NodeId> seeds, const SirParams& params, Rng& rng) {
    params.validate();
    if (seeds.empty()) throw std::invalid_argument("empty seed set");
    const auto& graph = network.graph();
    const std::size_t n = graph.node_count();
    const std::size_t horizon = params.horizon.value_or(network.default_horizon());

    std::vector<std::uint8_t> state(n, kSusceptible);
    std::vector<std::uint32_t> infected;
    for (const NodeId id : seeds) {
        const auto idx = graph.index_of(id);
        if (!idx) throw std::invalid_argument("seed " + std::to_string(id) + " is not in the graph");
        if (state[*idx] == kInfected) continue;
        state[*idx] = kInfected;
        infected.push_back(static_cast<std::uint32_t>(*idx));
    }
    std::sort(infected.begin(), infected.end());

    SirCounts counts{n - infected.size(), infected.size(), 0};
    SirTrace trace;
    trace.steps.reserve(horizon + 1);
    trace.steps.push_back(counts);

    std::vector<std::uint32_t> next;
    for (std::size_t step = 1; step <= horizon; ++step) {
        if (infected.empty()) {
            trace.steps.push_back(counts);
            continue;
        }
        const auto s = static_cast<std::int64_t>(step);
        next.clear();
        for (const std::uint32_t u : infected) {
            for (const auto& arc : network.arcs(u)) {
                if (arc.slot > s) break;
                if (params.mode == SirMode::Exact && arc.slot != s) continue;
                if (state[arc.target] != kSusceptible) continue;
                if (rng.bernoulli(params.p_infect)) {
                    state[arc.target] = kInfected;
                    next.push_back(arc.target);
                }
            }
        }
        const std::size_t newly = next.size();
        std::size_t recovered_now = 0;
        for (const std::uint32_t u : infected) {
            if (rng.bernoulli(params.p_recover)) {
                state[u] = kRecovered;
                ++recovered_now;
            } else {
                next.push_back(u);
            }
        }
        std::sort(next.begin(), next.end());
        infected.swap(next);
        counts.susceptible -= newly;
        counts.infected = infected.size();
        counts.recovered += recovered_now;
        trace.steps.push_back(counts);
    }
    trace.final_reached = counts.infected + counts.recovered;
    return trace;
}

SirTrace run_trial(const DisseminationGraph& graph, std::span<const NodeId> seeds, const SirParams& params, Rng& rng) {
    const SirNetwork network(graph, params.beta);
    return run_trial(network, seeds, params, rng);
}

std::vector<NodeId> select_seeds(const RankResult& ranking, const DisseminationGraph& graph, std::size_t k) {
    std::vector<NodeId> seeds;
    for (const NodeId id : ranking.order) {
        if (seeds.size() == k) break;
        if (graph.contains(id)) seeds.push_back(id);
    }
    if (seeds.size() < k) {
        throw std::invalid_argument("ranking covers only " + std::to_string(seeds.size()) + " graph nodes, need " +
                                    std::to_string(k));
    }
    return seeds;
}

namespace {

/// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace

MeanCurve mean_curve(std::span<const SirTrace> traces) {
    MeanCurve curve;
    if (traces.empty()) return curve;
    const std::size_t len = traces.front().steps.size();
    const double count = static_cast<double>(traces.size());
    curve.susceptible.resize(len);
    curve.infected.resize(len);
    curve.recovered.resize(len);
    for (std::size_t s = 0; s < len; ++s) {
        CompensatedSum S;
        CompensatedSum I;
        CompensatedSum R;
        for (const auto& t : traces) {
            S.add(static_cast<double>(t.steps[s].susceptible));
            I.add(static_cast<double>(t.steps[s].infected));
            R.add(static_cast<double>(t.steps[s].recovered));
        }
        curve.susceptible[s] = S.value() / count;
        curve.infected[s] = I.value() / count;
        curve.recovered[s] = R.value() / count;
    }
    return curve;
}

SeedComparison evaluate_seeds(const DisseminationGraph& graph, const RankResult& rank_a, const RankResult& rank_b,
                              const SirParams& params, unsigned threads, std::string label_a, std::string label_b) {
    params.validate();
    if (params.seed_count > graph.node_count()) {
        throw std::invalid_argument("seed count " + std::to_string(params.seed_count) + " exceeds population " +
                                    std::to_string(graph.node_count()));
    }
    const SirNetwork network(graph, params.beta);

    SeedComparison cmp;
    cmp.params = params;
    cmp.population = graph.node_count();
    cmp.horizon = params.horizon.value_or(network.default_horizon());
    cmp.a.label = std::move(label_a);
    cmp.b.label = std::move(label_b);
    cmp.a.seeds = select_seeds(rank_a, graph, params.seed_count);
    cmp.b.seeds = select_seeds(rank_b, graph, params.seed_count);

    for (MethodOutcome* m : {&cmp.a, &cmp.b}) {
        m->traces.resize(params.trials);
        parallel_for_blocks(params.trials, threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t t = begin; t < end; ++t) {
                Rng rng(derive_seed(params.rng_seed, "sir/trial", t));
                m->traces[t] = run_trial(network, m->seeds, params, rng);
            }
        });
        m->mean = mean_curve(m->traces);
        CompensatedSum total;
        for (const auto& t : m->traces) {
            m->finals.push_back(t.final_reached);
            total.add(static_cast<double>(t.final_reached));
        }
        m->mean_final = total.value() / static_cast<double>(params.trials);
    }
    cmp.ratio = cmp.a.mean_final / cmp.b.mean_final;
    return cmp;
}

std::string trace_csv(const SirTrace& trace) {
    std::ostringstream out;
    out << "step,S,I,R\n";
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
        const auto& c = trace.steps[s];
        out << s << ',' << c.susceptible << ',' << c.infected << ',' << c.recovered << '\n';
    }
    return out.str();
}

std::string mean_trace_csv(const MeanCurve& curve) {
    std::ostringstream out;
    out << "step,S,I,R\n";
    for (std::size_t s = 0; s < curve.susceptible.size(); ++s) {
        out << s << ',' << io::format_real(curve.susceptible[s], 12) << ',' << io::format_real(curve.infected[s], 12)
            << ',' << io::format_real(curve.recovered[s], 12) << '\n';
    }
    return out.str();
}

nlohmann::ordered_json comparison_json(const SeedComparison& cmp) {
    auto method = [](const MethodOutcome& m) {
        nlohmann::ordered_json j;
        j["label"] = m.label;
        j["seeds"] = m.seeds;
        j["mean_final"] = m.mean_final;
        j["finals"] = m.finals;
        j["curve"] = {{"S", m.mean.susceptible}, {"I", m.mean.infected}, {"R", m.mean.recovered}};
        return j;
    };
    nlohmann::ordered_json j;
    j["params"] = {
        {"p_infect", cmp.params.p_infect},
        {"p_recover", cmp.params.p_recover},
        {"seed_count", cmp.params.seed_count},
        {"trials", cmp.params.trials},
        {"horizon", cmp.horizon},
        {"rng_seed", cmp.params.rng_seed},
        {"mode", cmp.params.mode == SirMode::Cumulative ? "cumulative" : "exact"},
        {"beta_seconds", cmp.params.beta.count()},
    };
    j["population"] = cmp.population;
    j["methods"] = nlohmann::ordered_json::array({method(cmp.a), method(cmp.b)});
    j["finals"] = {{cmp.a.label, cmp.a.mean_final}, {cmp.b.label, cmp.b.mean_final}};
    j["ratio"] = cmp.ratio;
    return j;
}

}  // namespace noderank

#include "noderank/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "noderank/io.hpp"
#include "noderank/parallel.hpp"
#include "noderank/rng.hpp"

namespace noderank {

// ---------------------------------------------------------------------------
// UndirectedGraph

UndirectedGraph::UndirectedGraph(std::span<const std::pair<NodeId, NodeId>> edges,
                                 std::span<const NodeId> extra_nodes) {
    nodes_.assign(extra_nodes.begin(), extra_nodes.end());
    for (const auto& [a, b] : edges) {
        nodes_.push_back(a);
        nodes_.push_back(b);
    }
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

    auto index = [&](NodeId id) {
        return static_cast<std::uint32_t>(std::lower_bound(nodes_.begin(), nodes_.end(), id) - nodes_.begin());
    };
    std::vector<std::pair<std::uint32_t, std::uint32_t>> arcs;
    arcs.reserve(2 * edges.size());
    for (const auto& [a, b] : edges) {
        if (a == b) continue;
        const auto ia = index(a);
        const auto ib = index(b);
        arcs.emplace_back(ia, ib);
        arcs.emplace_back(ib, ia);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    offsets_.assign(nodes_.size() + 1, 0);
    adjacency_.reserve(arcs.size());
    for (const auto& [a, b] : arcs) {
        ++offsets_[a + 1];
        adjacency_.push_back(b);
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) offsets_[i + 1] += offsets_[i];
}

UndirectedGraph UndirectedGraph::from(const DisseminationGraph& graph) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(graph.edge_count());
    for (const auto& e : graph.edges()) pairs.emplace_back(e.informer, e.receiver);
    return UndirectedGraph(pairs, graph.nodes());
}

UndirectedGraph UndirectedGraph::from(const RelationalGraph& graph) {
    const auto pairs = graph.edge_list();
    return UndirectedGraph(pairs, graph.nodes());
}

std::span<const std::uint32_t> UndirectedGraph::neighbors(std::size_t node) const {
    return std::span<const std::uint32_t>(adjacency_).subspan(offsets_[node], offsets_[node + 1] - offsets_[node]);
}

bool UndirectedGraph::adjacent(std::size_t a, std::size_t b) const {
    const auto list = neighbors(a);
    return std::binary_search(list.begin(), list.end(), static_cast<std::uint32_t>(b));
}

// ---------------------------------------------------------------------------
// Walks

void Node2VecParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("node2vec parameter must be positive: ") + what);
    };
    require(p > 0 && std::isfinite(p), "p");
    require(q > 0 && std::isfinite(q), "q");
    require(walk_length > 0, "walk_length");
    require(walks_per_node > 0, "walks_per_node");
    require(window > 0, "window");
    require(negatives > 0, "negatives");
    require(learning_rate > 0 && std::isfinite(learning_rate), "learning_rate");
    require(dim > 0, "dim");
}

std::vector<NodeId> WalkCorpus::walk_ids(std::size_t i) const {
    std::vector<NodeId> out;
    for (const auto t : walk(i)) out.push_back(vocabulary[t]);
    return out;
}

void WalkCorpus::append(std::span<const std::uint32_t> walk) {
    tokens.insert(tokens.end(), walk.begin(), walk.end());
    offsets.push_back(tokens.size());
}

namespace {

void biased_walk(const UndirectedGraph& graph, const Node2VecParams& params, std::uint32_t start, Rng& rng,
                 std::vector<std::uint32_t>& walk) {
    walk.clear();
    walk.push_back(start);
    if (params.walk_length < 2) return;
    auto first = graph.neighbors(start);
    if (first.empty()) return;
    walk.push_back(first[rng.below(first.size())]);

    const double return_weight = 1.0 / params.p;
    const double outward_weight = 1.0 / params.q;
    const double max_weight = std::max({return_weight, 1.0, outward_weight});

    // Rejection sampling against the unnormalized second-order weights.
    while (walk.size() < params.walk_length) {
        const std::uint32_t prev = walk[walk.size() - 2];
        const std::uint32_t cur = walk.back();
        const auto nbrs = graph.neighbors(cur);
        if (nbrs.empty()) break;
        for (;;) {
            const std::uint32_t x = nbrs[rng.below(nbrs.size())];
            double w = outward_weight;
            if (x == prev) {
                w = return_weight;
            } else if (graph.adjacent(prev, x)) {
                w = 1.0;
            }
            if (rng.uniform() * max_weight < w) {
                walk.push_back(x);
                break;
            }
        }
    }
}

}  // namespace

WalkCorpus generate_walks(const UndirectedGraph& graph, const Node2VecParams& params, unsigned threads) {
    params.validate();
    const std::size_t n = graph.node_count();
    const std::size_t total = n * params.walks_per_node;

    std::vector<std::vector<std::uint32_t>> walks(total);
    parallel_for_blocks(total, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t w = begin; w < end; ++w) {
            Rng rng(derive_seed(params.rng_seed, "embed/walk", w));
            biased_walk(graph, params, static_cast<std::uint32_t>(w % n), rng, walks[w]);
        }
    });

    WalkCorpus corpus;
    corpus.vocabulary.assign(graph.nodes().begin(), graph.nodes().end());
    std::size_t tokens = 0;
    for (const auto& w : walks) tokens += w.size();
    corpus.tokens.reserve(tokens);
    corpus.offsets.reserve(total + 1);
    for (const auto& w : walks) corpus.append(w);
    return corpus;
}

// ---------------------------------------------------------------------------
// EmbeddingTable

EmbeddingTable::EmbeddingTable(std::vector<NodeId> ids, unsigned dim, std::vector<float> values)
    : ids_(std::move(ids)), dim_(dim), values_(std::move(values)) {
    if (dim_ == 0) throw std::invalid_argument("embedding dimension must be positive");
    if (values_.size() != ids_.size() * dim_) throw std::invalid_argument("embedding value count mismatch");
    if (!std::is_sorted(ids_.begin(), ids_.end()) ||
        std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
        throw std::invalid_argument("embedding ids must be sorted and unique");
    }
    if (!std::all_of(values_.begin(), values_.end(), [](float x) { return std::isfinite(x); })) {
        throw std::invalid_argument("embedding contains non-finite values");
    }
}

bool EmbeddingTable::contains(NodeId id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
}

std::span<const float> EmbeddingTable::vector(NodeId id) const {
    const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) {
        throw std::out_of_range("node " + std::to_string(id) + " has no embedding");
    }
    return row(static_cast<std::size_t>(it - ids_.begin()));
}

// ---------------------------------------------------------------------------
// SGNS

namespace {

constexpr double kMaxExp = 6.0;

template <bool Atomic>
struct Access {
    static float load(const float& x) {
        if constexpr (Atomic) {
            return std::atomic_ref<float>(const_cast<float&>(x)).load(std::memory_order_relaxed);
        } else {
            return x;
        }
    }
    static void add(float& x, float delta) {
        if constexpr (Atomic) {
            std::atomic_ref<float> ref(x);
            ref.store(ref.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
        } else {
            x += delta;
        }
    }
};

class NegativeSampler {
public:
    explicit NegativeSampler(const WalkCorpus& corpus) {
        std::vector<double> counts(corpus.vocabulary.size(), 0.0);
        for (const auto t : corpus.tokens) counts[t] += 1.0;
        cumulative_.resize(counts.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            acc += std::pow(counts[i], 0.75);
            cumulative_[i] = acc;
        }
    }

    std::uint32_t sample(Rng& rng) const {
        const double x = rng.uniform() * cumulative_.back();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
        return static_cast<std::uint32_t>(std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1));
    }

private:
    std::vector<double> cumulative_;
};

template <bool Atomic>
void train_block(const WalkCorpus& corpus, const Node2VecParams& params, const NegativeSampler& sampler,
                 std::size_t begin, std::size_t end, Rng& rng, std::vector<float>& input,
                 std::vector<float>& output, std::atomic<std::size_t>& processed, double total_tokens) {
    using A = Access<Atomic>;
    const unsigned dim = params.dim;
    const int window = static_cast<int>(params.window);
    std::vector<float> hidden_error(dim);
    std::vector<float> context(dim);

    for (std::size_t w = begin; w < end; ++w) {
        const auto walk = corpus.walk(w);
        const double progress = static_cast<double>(processed.load(std::memory_order_relaxed)) / (total_tokens + 1.0);
        const float alpha = static_cast<float>(params.learning_rate * std::max(1e-4, 1.0 - progress));
        const int len = static_cast<int>(walk.size());

        for (int c = 0; c < len; ++c) {
            const std::uint32_t center = walk[c];
            const int reduced = static_cast<int>(rng.below(params.window));
            for (int a = reduced; a < 2 * window + 1 - reduced; ++a) {
                if (a == window) continue;
                const int pos = c - window + a;
                if (pos < 0 || pos >= len) continue;
                float* l1 = input.data() + static_cast<std::size_t>(walk[pos]) * dim;
                for (unsigned k = 0; k < dim; ++k) {
                    context[k] = A::load(l1[k]);
                    hidden_error[k] = 0.0f;
                }
                for (unsigned d = 0; d <= params.negatives; ++d) {
                    std::uint32_t target = center;
                    float label = 1.0f;
                    if (d > 0) {
                        target = sampler.sample(rng);
                        if (target == center) continue;
                        label = 0.0f;
                    }
                    float* l2 = output.data() + static_cast<std::size_t>(target) * dim;
                    double f = 0.0;
                    for (unsigned k = 0; k < dim; ++k) f += static_cast<double>(context[k]) * A::load(l2[k]);
                    double g = 0.0;
                    if (f > kMaxExp) {
                        g = (label - 1.0) * alpha;
                    } else if (f < -kMaxExp) {
                        g = label * alpha;
                    } else {
                        g = (label - 1.0 / (1.0 + std::exp(-f))) * alpha;
                    }
                    const float gf = static_cast<float>(g);
                    for (unsigned k = 0; k < dim; ++k) {
                        hidden_error[k] += gf * A::load(l2[k]);
                        A::add(l2[k], gf * context[k]);
                    }
                }
                for (unsigned k = 0; k < dim; ++k) A::add(l1[k], hidden_error[k]);
            }
        }
        processed.fetch_add(walk.size(), std::memory_order_relaxed);
    }
}

}  // namespace

EmbeddingTable train_sgns(const WalkCorpus& corpus, const Node2VecParams& params, unsigned threads) {
    params.validate();
    if (corpus.walk_count() == 0 || corpus.tokens.empty()) throw std::invalid_argument("empty walk corpus");
    const std::size_t n = corpus.vocabulary.size();
    const unsigned dim = params.dim;

    std::vector<float> input(n * dim);
    {
        Rng init(derive_seed(params.rng_seed, "embed/init"));
        for (auto& x : input) x = static_cast<float>((init.uniform() - 0.5) / dim);
    }
    std::vector<float> output(n * dim, 0.0f);

    if (params.epochs > 0) {
        const NegativeSampler sampler(corpus);
        const double total_tokens = static_cast<double>(params.epochs) * static_cast<double>(corpus.tokens.size());
        std::atomic<std::size_t> processed{0};
        threads = resolve_threads(threads);
        for (unsigned epoch = 0; epoch < params.epochs; ++epoch) {
            if (threads <= 1) {
                Rng rng(derive_seed(params.rng_seed, "embed/sgns", epoch));
                train_block<false>(corpus, params, sampler, 0, corpus.walk_count(), rng, input, output, processed,
                                   total_tokens);
            } else {
                const std::size_t walks = corpus.walk_count();
                const std::size_t chunk = (walks + threads - 1) / threads;
                parallel_for_blocks(threads, threads, [&](std::size_t tb, std::size_t te) {
                    for (std::size_t t = tb; t < te; ++t) {
                        Rng rng(derive_seed(params.rng_seed, "embed/sgns-parallel", epoch * threads + t));
                        const std::size_t begin = std::min(walks, t * chunk);
                        const std::size_t end = std::min(walks, begin + chunk);
                        train_block<true>(corpus, params, sampler, begin, end, rng, input, output, processed,
                                          total_tokens);
                    }
                });
            }
        }
    }
    return EmbeddingTable(corpus.vocabulary, dim, std::move(input));
}

// ---------------------------------------------------------------------------
// Similarity

namespace {

template <typename T>
double cosine_impl(std::span<const T> u, std::span<const T> v) {
    if (u.size() != v.size()) throw std::invalid_argument("cosine of vectors with different lengths");
    double dot = 0.0;
    double nu = 0.0;
    double nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u[i];
        const double b = v[i];
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if (nu == 0.0 || nv == 0.0) throw std::domain_error("undefined similarity");
    return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

}  // namespace

double cosine(std::span<const double> u, std::span<const double> v) { return cosine_impl(u, v); }
double cosine(std::span<const float> u, std::span<const float> v) { return cosine_impl(u, v); }

double intimacy(NodeId u, NodeId v, const EmbeddingTable& table) {
    return std::max(cosine(table.vector(u), table.vector(v)), kIntimacyFloor);
}

// ---------------------------------------------------------------------------
// Text format

void save_embeddings(std::ostream& out, const EmbeddingTable& table) {
    out << table.size() << ' ' << table.dim() << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.ids()[i];
        for (const float x : table.row(i)) out << ' ' << io::format_real(x, 9);
        out << '\n';
    }
}

std::string embeddings_text(const EmbeddingTable& table) {
    std::ostringstream out;
    save_embeddings(out, table);
    return out.str();
}

EmbeddingTable load_embeddings(std::istream& in) {
    std::string line;
    std::size_t count = 0;
    unsigned dim = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) break;
        line.clear();
    }
    {
        std::istringstream header(line);
        if (line.empty() || !(header >> count >> dim) || dim == 0) throw DataError("missing header");
    }
    std::vector<std::pair<NodeId, std::vector<float>>> rows;
    rows.reserve(count);
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream row(line);
        NodeId id = 0;
        if (!(row >> id)) throw DataError("bad node id at line " + std::to_string(number));
        std::vector<float> values;
        values.reserve(dim);
        std::string token;
        while (row >> token) {
            float x = 0.0f;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
            if (ec != std::errc{} || ptr != token.data() + token.size()) {
                throw DataError("bad value at line " + std::to_string(number));
            }
            values.push_back(x);
        }
        if (values.size() != dim) {
            throw DataError("dimension mismatch at line " + std::to_string(number) + ": expected " +
                            std::to_string(dim) + ", found " + std::to_string(values.size()));
        }
        rows.emplace_back(id, std::move(values));
    }
    if (rows.size() != count) {
        throw DataError("header declares " + std::to_string(count) + " rows, found " + std::to_string(rows.size()));
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<NodeId> ids;
    std::vector<float> values;
    ids.reserve(count);
    values.reserve(count * dim);
    for (auto& [id, v] : rows) {
        ids.push_back(id);
        values.insert(values.end(), v.begin(), v.end());
    }
    try {
        return EmbeddingTable(std::move(ids), dim, std::move(values));
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
    std::istringstream in(io::read_file(path));
    return load_embeddings(in);
}

}  // namespace noderank

#include "noderank/graph.hpp"

#include <algorithm>
#include <charconv>
#include <iterator>
#include <sstream>
#include <tuple>

namespace noderank {

namespace {

template <typename T>
bool parse_integer(std::string_view token, T& value) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc{} && ptr == last;
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

/// Splits on runs of whitespace; stops after `max_tokens` + 1 tokens.
std::size_t split_whitespace(std::string_view line, std::string_view* out, std::size_t max_tokens) {
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < line.size() && count <= max_tokens) {
        while (i < line.size() && is_space(line[i])) ++i;
        if (i == line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) ++j;
        if (count < max_tokens) out[count] = line.substr(i, j - i);
        ++count;
        i = j;
    }
    return count;
}

bool blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return is_space(c); });
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        fn(number, std::string_view(line));
    }
}

}  // namespace

ActionKind parse_action_token(std::string_view token) noexcept {
    if (token == "RT") return ActionKind::Retweet;
    if (token == "RE") return ActionKind::Reply;
    if (token == "MT") return ActionKind::Mention;
    return ActionKind::Other;
}

std::string_view action_token(ActionKind kind) noexcept {
    switch (kind) {
        case ActionKind::Retweet: return "RT";
        case ActionKind::Reply: return "RE";
        case ActionKind::Mention: return "MT";
        case ActionKind::Other: break;
    }
    return "OT";
}

int action_priority(ActionKind kind) noexcept {
    return static_cast<int>(kind);
}

std::string_view view_name(View view) noexcept {
    switch (view) {
        case View::Retweet: return "retweet";
        case View::Reply: return "reply";
        case View::Mention: return "mention";
        case View::Mixed: break;
    }
    return "mixed";
}

std::optional<View> parse_view(std::string_view name) noexcept {
    if (name == "retweet" || name == "RT") return View::Retweet;
    if (name == "reply" || name == "RE") return View::Reply;
    if (name == "mention" || name == "MT") return View::Mention;
    if (name == "mixed") return View::Mixed;
    return std::nullopt;
}

bool view_accepts(View view, ActionKind kind) noexcept {
    switch (view) {
        case View::Retweet: return kind == ActionKind::Retweet;
        case View::Reply: return kind == ActionKind::Reply;
        case View::Mention: return kind == ActionKind::Mention;
        case View::Mixed: break;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Parsing

ActivityParse parse_activity(std::istream& in) {
    ActivityParse result;
    for_each_line(in, [&](std::size_t number, std::string_view line) {
        result.lines_read = number;
        if (blank(line)) return;
        std::string_view tok[4];
        const std::size_t n = split_whitespace(line, tok, 4);
        if (n != 4) {
            ++result.malformed;
            result.diagnostics.push_back({number, "expected 4 fields, found " + std::to_string(n)});
            return;
        }
        NodeId a = 0;
        NodeId b = 0;
        Timestamp t = 0;
        if (!parse_integer(tok[0], a) || !parse_integer(tok[1], b)) {
            ++result.malformed;
            result.diagnostics.push_back({number, "non-integer user id"});
            return;
        }
        if (!parse_integer(tok[2], t)) {
            ++result.malformed;
            result.diagnostics.push_back({number, "non-integer timestamp '" + std::string(tok[2]) + "'"});
            return;
        }
        if (t < 0) {
            ++result.malformed;
            result.diagnostics.push_back({number, "negative timestamp"});
            return;
        }
        if (a == b) {
            ++result.self_loops;
            return;
        }
        const ActionKind kind = parse_action_token(tok[3]);
        if (kind == ActionKind::Other) {
            ++result.unknown_actions;
            result.diagnostics.push_back({number, "unknown action '" + std::string(tok[3]) + "' read as Other"});
        }
        result.edges.push_back({b, a, t, kind});
    });
    if (result.lines_read == 0) {
        result.diagnostics.push_back({0, "empty input"});
    }
    return result;
}

ActivityParse parse_activity(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_activity(in);
}

RelationalGraph::RelationalGraph(std::vector<std::pair<NodeId, NodeId>> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    nodes_.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        nodes_.push_back(a);
        nodes_.push_back(b);
    }
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    nodes_.shrink_to_fit();

    offsets_.assign(nodes_.size() + 1, 0);
    targets_.reserve(edges.size());
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        offsets_[i] = targets_.size();
        while (cursor < edges.size() && edges[cursor].first == nodes_[i]) {
            targets_.push_back(edges[cursor].second);
            ++cursor;
        }
    }
    offsets_[nodes_.size()] = targets_.size();
}

std::span<const NodeId> RelationalGraph::followees(NodeId follower) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), follower);
    if (it == nodes_.end() || *it != follower) return {};
    const auto i = static_cast<std::size_t>(it - nodes_.begin());
    return std::span<const NodeId>(targets_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::vector<std::pair<NodeId, NodeId>> RelationalGraph::edge_list() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(targets_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            out.emplace_back(nodes_[i], targets_[k]);
        }
    }
    return out;
}

SocialParse parse_social(std::istream& in) {
    SocialParse result;
    std::vector<std::pair<NodeId, NodeId>> edges;
    for_each_line(in, [&](std::size_t number, std::string_view line) {
        result.lines_read = number;
        if (blank(line)) return;
        std::string_view tok[2];
        const std::size_t n = split_whitespace(line, tok, 2);
        NodeId a = 0;
        NodeId b = 0;
        if (n != 2 || !parse_integer(tok[0], a) || !parse_integer(tok[1], b)) {
            ++result.malformed;
            result.diagnostics.push_back({number, "expected two integer ids"});
            return;
        }
        if (a == b) {
            ++result.self_loops;
            return;
        }
        edges.emplace_back(a, b);
    });
    if (result.lines_read == 0) {
        result.diagnostics.push_back({0, "empty input"});
    }
    result.graph = RelationalGraph(std::move(edges));
    return result;
}

SocialParse parse_social(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_social(in);
}

// ---------------------------------------------------------------------------
// Dedup

bool canonical_less(const TemporalEdge& a, const TemporalEdge& b) noexcept {
    return std::make_tuple(a.timestamp, a.informer, a.receiver, action_priority(a.action)) <
           std::make_tuple(b.timestamp, b.informer, b.receiver, action_priority(b.action));
}

std::vector<TemporalEdge> dedup_earliest(std::span<const TemporalEdge> edges) {
    std::vector<TemporalEdge> sorted(edges.begin(), edges.end());
    std::sort(sorted.begin(), sorted.end(), [](const TemporalEdge& a, const TemporalEdge& b) {
        return std::make_tuple(a.informer, a.receiver, a.timestamp, action_priority(a.action)) <
               std::make_tuple(b.informer, b.receiver, b.timestamp, action_priority(b.action));
    });
    std::vector<TemporalEdge> out;
    out.reserve(sorted.size());
    for (const auto& e : sorted) {
        if (!out.empty() && out.back().informer == e.informer && out.back().receiver == e.receiver) continue;
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

// ---------------------------------------------------------------------------
// DisseminationGraph

DisseminationGraph::DisseminationGraph(std::vector<TemporalEdge> edges, View view,
                                       std::span<const NodeId> extra_nodes)
    : view_(view), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end(), canonical_less);

    nodes_.assign(extra_nodes.begin(), extra_nodes.end());
    nodes_.reserve(nodes_.size() + 2 * edges_.size());
    for (const auto& e : edges_) {
        if (e.informer == e.receiver) {
            throw std::invalid_argument("self-loop on node " + std::to_string(e.informer));
        }
        if (e.timestamp < 0) throw std::invalid_argument("negative timestamp");
        nodes_.push_back(e.informer);
        nodes_.push_back(e.receiver);
    }
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

    if (!edges_.empty()) {
        t0_ = edges_.front().timestamp;
        t_max_ = edges_.back().timestamp;
    }

    const std::size_t n = nodes_.size();
    const std::size_t m = edges_.size();
    src_.resize(m);
    dst_.resize(m);
    std::vector<std::uint32_t> out_deg(n, 0);
    std::vector<std::uint32_t> in_deg(n, 0);
    for (std::size_t e = 0; e < m; ++e) {
        src_[e] = static_cast<std::uint32_t>(*index_of(edges_[e].informer));
        dst_[e] = static_cast<std::uint32_t>(*index_of(edges_[e].receiver));
        ++out_deg[src_[e]];
        ++in_deg[dst_[e]];
    }

    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        out_offsets_[i + 1] = out_offsets_[i] + out_deg[i];
        in_offsets_[i + 1] = in_offsets_[i] + in_deg[i];
    }
    out_list_.resize(m);
    in_list_.resize(m);
    std::vector<std::uint32_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
    std::vector<std::uint32_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
    for (std::size_t e = 0; e < m; ++e) {
        out_list_[out_fill[src_[e]]++] = static_cast<std::uint32_t>(e);
        in_list_[in_fill[dst_[e]]++] = static_cast<std::uint32_t>(e);
    }

    // one edge per ordered pair
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint32_t> targets;
        for (const auto e : out_edges(i)) targets.push_back(dst_[e]);
        std::sort(targets.begin(), targets.end());
        if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) {
            throw std::invalid_argument("duplicate edge from node " + std::to_string(nodes_[i]));
        }
    }
}

std::optional<std::size_t> DisseminationGraph::index_of(NodeId id) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::span<const std::uint32_t> DisseminationGraph::out_edges(std::size_t node) const {
    return std::span<const std::uint32_t>(out_list_).subspan(out_offsets_[node], out_offsets_[node + 1] - out_offsets_[node]);
}

std::span<const std::uint32_t> DisseminationGraph::in_edges(std::size_t node) const {
    return std::span<const std::uint32_t>(in_list_).subspan(in_offsets_[node], in_offsets_[node + 1] - in_offsets_[node]);
}

DisseminationGraph build_view(std::span<const TemporalEdge> edges, View view) {
    std::vector<TemporalEdge> filtered;
    filtered.reserve(edges.size());
    std::copy_if(edges.begin(), edges.end(), std::back_inserter(filtered),
                 [view](const TemporalEdge& e) { return view_accepts(view, e.action); });
    auto deduped = dedup_earliest(filtered);
    if (deduped.empty()) {
        throw DataError("no edges in " + std::string(view_name(view)) + " view");
    }
    return DisseminationGraph(std::move(deduped), view);
}

// ---------------------------------------------------------------------------
// SCC

std::vector<std::vector<std::uint32_t>> strongly_connected_components(const DisseminationGraph& graph) {
    constexpr std::uint32_t unvisited = UINT32_MAX;
    const std::size_t n = graph.node_count();
    std::vector<std::uint32_t> number(n, unvisited);
    std::vector<std::uint32_t> low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::uint32_t> stack;
    std::vector<std::vector<std::uint32_t>> components;

    struct Frame {
        std::uint32_t node;
        std::uint32_t next_edge;
    };
    std::vector<Frame> call;
    std::uint32_t counter = 0;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (number[root] != unvisited) continue;
        call.push_back({root, 0});
        number[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;

        while (!call.empty()) {
            Frame& frame = call.back();
            const auto out = graph.out_edges(frame.node);
            if (frame.next_edge < out.size()) {
                const std::uint32_t succ = graph.receiver_index(out[frame.next_edge++]);
                if (number[succ] == unvisited) {
                    number[succ] = low[succ] = counter++;
                    stack.push_back(succ);
                    on_stack[succ] = 1;
                    call.push_back({succ, 0});
                } else if (on_stack[succ]) {
                    low[frame.node] = std::min(low[frame.node], number[succ]);
                }
                continue;
            }
            const std::uint32_t v = frame.node;
            call.pop_back();
            if (!call.empty()) {
                low[call.back().node] = std::min(low[call.back().node], low[v]);
            }
            if (low[v] == number[v]) {
                std::vector<std::uint32_t> component;
                std::uint32_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    component.push_back(w);
                } while (w != v);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
        }
    }
    return components;
}

DisseminationGraph largest_scc(const DisseminationGraph& graph) {
    if (graph.empty()) throw DataError("empty graph");
    const auto components = strongly_connected_components(graph);
    const std::vector<std::uint32_t>* best = nullptr;
    for (const auto& c : components) {
        // indices are id-sorted, so c.front() is the component's smallest id
        if (best == nullptr || c.size() > best->size() ||
            (c.size() == best->size() && c.front() < best->front())) {
            best = &c;
        }
    }
    std::vector<char> member(graph.node_count(), 0);
    std::vector<NodeId> ids;
    ids.reserve(best->size());
    for (const auto i : *best) {
        member[i] = 1;
        ids.push_back(graph.node(i));
    }
    std::vector<TemporalEdge> kept;
    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        if (member[graph.informer_index(e)] && member[graph.receiver_index(e)]) {
            kept.push_back(graph.edges()[e]);
        }
    }
    return DisseminationGraph(std::move(kept), graph.view(), ids);
}

bool is_strongly_connected(const DisseminationGraph& graph) {
    const std::size_t n = graph.node_count();
    if (n == 0) return true;
    auto reaches_all = [&](bool forward) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> queue{0};
        seen[0] = 1;
        std::size_t reached = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t v = queue[head];
            const auto list = forward ? graph.out_edges(v) : graph.in_edges(v);
            for (const auto e : list) {
                const std::size_t w = forward ? graph.receiver_index(e) : graph.informer_index(e);
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    queue.push_back(w);
                }
            }
        }
        return reached == n;
    };
    return reaches_all(true) && reaches_all(false);
}

// ---------------------------------------------------------------------------
// Canonical file

void write_canonical_edges(std::ostream& out, std::span<const TemporalEdge> edges) {
    std::vector<TemporalEdge> sorted(edges.begin(), edges.end());
    std::sort(sorted.begin(), sorted.end(), canonical_less);
    for (const auto& e : sorted) {
        out << e.informer << ',' << e.receiver << ',' << e.timestamp << ',' << action_token(e.action) << '\n';
    }
}

std::string canonical_edges_text(std::span<const TemporalEdge> edges) {
    std::ostringstream out;
    write_canonical_edges(out, edges);
    return out.str();
}

std::vector<TemporalEdge> read_canonical_edges(std::istream& in) {
    std::vector<TemporalEdge> edges;
    for_each_line(in, [&](std::size_t number, std::string_view line) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) return;
        std::string_view field[4];
        std::size_t count = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                if (count < 4) field[count] = line.substr(start, i - start);
                ++count;
                start = i + 1;
            }
        }
        TemporalEdge e;
        if (count != 4 || !parse_integer(field[0], e.informer) || !parse_integer(field[1], e.receiver) ||
            !parse_integer(field[2], e.timestamp)) {
            throw DataError("malformed canonical edge at line " + std::to_string(number));
        }
        e.action = parse_action_token(field[3]);
        edges.push_back(e);
    });
    return edges;
}

View infer_view(std::span<const TemporalEdge> edges) noexcept {
    if (edges.empty()) return View::Mixed;
    const ActionKind first = edges.front().action;
    const bool uniform = std::all_of(edges.begin(), edges.end(),
                                     [first](const TemporalEdge& e) { return e.action == first; });
    if (!uniform) return View::Mixed;
    switch (first) {
        case ActionKind::Retweet: return View::Retweet;
        case ActionKind::Reply: return View::Reply;
        case ActionKind::Mention: return View::Mention;
        case ActionKind::Other: break;
    }
    return View::Mixed;
}

}  // namespace noderank

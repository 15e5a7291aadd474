#include "noderank/app/config.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <type_traits>

#include "noderank/io.hpp"

namespace noderank::app {

namespace {

template <typename T>
struct is_optional : std::false_type {};
template <typename T>
struct is_optional<std::optional<T>> : std::true_type {};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string normalize_key(std::string_view key) {
    std::string k(key);
    for (char& c : k)
        if (c == '-') c = '_';
    return k;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + ": expected " +
                      std::string(expected));
}

template <typename T>
T parse_value(std::string_view key, std::string_view value) {
    if constexpr (std::is_same_v<T, bool>) {
        if (value == "true" || value == "1" || value == "yes") return true;
        if (value == "false" || value == "0" || value == "no") return false;
        bad_value(key, value, "true or false");
    } else if constexpr (std::is_integral_v<T>) {
        T out{};
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) bad_value(key, value, "an integer");
        return out;
    } else if constexpr (std::is_floating_point_v<T>) {
        T out{};
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) bad_value(key, value, "a number");
        return out;
    } else if constexpr (is_optional<T>::value) {
        if (value.empty() || value == "auto") return std::nullopt;
        return parse_value<typename T::value_type>(key, value);
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
        std::vector<std::string> items;
        std::size_t start = 0;
        while (start <= value.size()) {
            const auto comma = value.find(',', start);
            const auto item = trim(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start));
            if (!item.empty()) items.emplace_back(item);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return items;
    } else {
        return T(std::string(value));
    }
}

template <typename T>
std::string format_value(const T& v) {
    if constexpr (std::is_same_v<T, bool>) {
        return v ? "true" : "false";
    } else if constexpr (std::is_integral_v<T>) {
        return std::to_string(v);
    } else if constexpr (std::is_floating_point_v<T>) {
        // shortest text that reads back to the same double
        char buf[64];
        const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, ec == std::errc() ? end : buf);
    } else if constexpr (is_optional<T>::value) {
        return v ? format_value(*v) : std::string("auto");
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += ',';
            out += s;
        }
        return out;
    } else if constexpr (std::is_same_v<T, std::filesystem::path>) {
        return v.string();
    } else {
        return v;
    }
}

template <typename T>
ConfigField field(std::string_view key, std::string_view group, std::string_view help, T RunConfig::*member) {
    ConfigField f;
    f.key = key;
    f.group = group;
    f.help = help;
    f.is_flag = std::is_same_v<T, bool>;
    f.set = [member, key](RunConfig& c, std::string_view value) { c.*member = parse_value<T>(key, value); };
    f.get = [member](const RunConfig& c) { return format_value(c.*member); };
    return f;
}

std::vector<ConfigField> make_fields() {
    const std::string_view io = "Inputs and outputs";
    const std::string_view run = "Run";
    const std::string_view emb = "Embedding";
    const std::string_view rank = "Ranking";
    const std::string_view sir = "Simulation";
    return {
        field("activity", io, "activity file (userA userB timestamp action), optionally gzipped", &RunConfig::activity),
        field("social", io, "follower edge list (userA userB)", &RunConfig::social),
        field("graph", io, "canonical edge file written by ingest", &RunConfig::graph),
        field("embeddings", io, "embedding file written by embed", &RunConfig::embeddings),
        field("edges_from", io, "embed this follower edge list instead of the graph", &RunConfig::edges_from),
        field("rank_a", io, "first rank CSV for simulate", &RunConfig::rank_a),
        field("rank_b", io, "second rank CSV for simulate", &RunConfig::rank_b),
        field("label_a", io, "label for rank_a (default: from the file name)", &RunConfig::label_a),
        field("label_b", io, "label for rank_b (default: from the file name)", &RunConfig::label_b),
        field("out", io, "output directory", &RunConfig::out),
        field("view", run, "retweet, reply, mention, mixed or all", &RunConfig::view),
        field("variants", run, "comma separated list of NR, NR-A, NR-I, NR-AI, PR", &RunConfig::variants),
        field("rng_seed", run, "master random seed", &RunConfig::rng_seed),
        field("threads", run, "worker threads, 0 for all cores; 1 is bit-reproducible", &RunConfig::threads),
        field("strict", run, "exit with status 3 when a ranking does not converge", &RunConfig::strict),
        field("p", emb, "walk return parameter", &RunConfig::p),
        field("q", emb, "walk in-out parameter", &RunConfig::q),
        field("walk_length", emb, "nodes per walk", &RunConfig::walk_length),
        field("walks_per_node", emb, "walks started at each node", &RunConfig::walks_per_node),
        field("window", emb, "skip-gram context window", &RunConfig::window),
        field("negatives", emb, "negative samples per pair", &RunConfig::negatives),
        field("epochs", emb, "passes over the walk corpus", &RunConfig::epochs),
        field("learning_rate", emb, "initial learning rate", &RunConfig::learning_rate),
        field("dim", emb, "embedding dimension", &RunConfig::dim),
        field("damping", rank, "damping factor", &RunConfig::damping),
        field("epsilon", rank, "convergence threshold on the L1 score change", &RunConfig::epsilon),
        field("max_iter", rank, "iteration cap", &RunConfig::max_iter),
        field("beta_minutes", rank, "time slot width in minutes", &RunConfig::beta_minutes),
        field("w_retweet", rank, "retweet weight (auto: 1.0)", &RunConfig::w_retweet),
        field("w_reply", rank, "reply weight (auto: 0.8 mixed, 1.0 otherwise)", &RunConfig::w_reply),
        field("w_mention", rank, "mention weight (auto: 0.4 mixed, 1.0 otherwise)", &RunConfig::w_mention),
        field("w_other", rank, "weight of other actions (auto: 0.6 mixed, 1.0 otherwise)", &RunConfig::w_other),
        field("schedule", rank, "jacobi or gauss-seidel", &RunConfig::schedule),
        field("p_infect", sir, "infection probability per contact", &RunConfig::p_infect),
        field("p_recover", sir, "recovery probability per step", &RunConfig::p_recover),
        field("seed_count", sir, "top-k nodes seeded per method", &RunConfig::seed_count),
        field("trials", sir, "trials per method", &RunConfig::trials),
        field("horizon", sir, "steps per trial (auto: 2 * max slot + 50)", &RunConfig::horizon),
        field("sir_mode", sir, "cumulative or exact edge activation", &RunConfig::sir_mode),
    };
}

}  // namespace

const std::vector<ConfigField>& config_fields() {
    static const std::vector<ConfigField> fields = make_fields();
    return fields;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
    const std::string k = normalize_key(trim(key));
    for (const auto& f : config_fields()) {
        if (f.key == k) {
            f.set(config, trim(value));
            return;
        }
    }
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void apply_config_text(RunConfig& config, std::string_view text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        try {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

std::string serialize(const RunConfig& config) {
    std::string out;
    for (const auto& f : config_fields()) {
        out += f.key;
        out += '=';
        out += f.get(config);
        out += '\n';
    }
    return out;
}

View parse_view_setting(std::string_view name) {
    if (const auto v = parse_view(name)) return *v;
    throw ConfigError("unknown view '" + std::string(name) + "': expected retweet, reply, mention or mixed");
}

Node2VecParams RunConfig::node2vec_params() const {
    Node2VecParams n;
    n.p = p;
    n.q = q;
    n.walk_length = walk_length;
    n.walks_per_node = walks_per_node;
    n.window = window;
    n.negatives = negatives;
    n.epochs = epochs;
    n.learning_rate = learning_rate;
    n.dim = dim;
    n.rng_seed = rng_seed;
    n.validate();
    return n;
}

NodeRankParams RunConfig::noderank_params(View v) const {
    NodeRankParams n;
    n.damping = damping;
    n.epsilon = epsilon;
    n.max_iter = max_iter;
    n.beta = std::chrono::minutes(beta_minutes);
    n.action_weights = default_action_weights(v);
    if (w_retweet) n.action_weights.retweet = *w_retweet;
    if (w_reply) n.action_weights.reply = *w_reply;
    if (w_mention) n.action_weights.mention = *w_mention;
    if (w_other) n.action_weights.other = *w_other;
    if (schedule == "jacobi") {
        n.schedule = Schedule::Jacobi;
    } else if (schedule == "gauss-seidel" || schedule == "gauss_seidel") {
        n.schedule = Schedule::GaussSeidel;
    } else {
        throw ConfigError("unknown schedule '" + schedule + "': expected jacobi or gauss-seidel");
    }
    n.validate();
    return n;
}

PageRankParams RunConfig::pagerank_params() const {
    PageRankParams pr;
    pr.damping = damping;
    pr.epsilon = epsilon;
    pr.max_iter = max_iter;
    pr.validate();
    return pr;
}

SirParams RunConfig::sir_params() const {
    SirParams s;
    s.p_infect = p_infect;
    s.p_recover = p_recover;
    s.seed_count = seed_count;
    s.trials = trials;
    s.horizon = horizon;
    s.rng_seed = rng_seed;
    s.beta = std::chrono::minutes(beta_minutes);
    if (sir_mode == "cumulative") {
        s.mode = SirMode::Cumulative;
    } else if (sir_mode == "exact") {
        s.mode = SirMode::Exact;
    } else {
        throw ConfigError("unknown sir_mode '" + sir_mode + "': expected cumulative or exact");
    }
    s.validate();
    return s;
}

}  // namespace noderank::app

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "noderank/embedding.hpp"
#include "noderank/noderank.hpp"
#include "noderank/pagerank.hpp"
#include "noderank/sir.hpp"

namespace noderank::app {

/// Bad key, bad value or bad combination of settings.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Everything a run depends on. Serialized next to the outputs so a run
/// can be repeated from the saved file alone.
struct RunConfig {
    // inputs and outputs
    std::filesystem::path activity;
    std::filesystem::path social;
    std::filesystem::path graph;
    std::filesystem::path embeddings;
    std::filesystem::path edges_from;  // embed this edge list instead of the graph
    std::filesystem::path rank_a;
    std::filesystem::path rank_b;
    std::string label_a;
    std::string label_b;
    std::filesystem::path out = "out";

    std::string view = "mixed";  // retweet, reply, mention, mixed or all
    std::vector<std::string> variants{"NR", "PR"};
    std::uint64_t rng_seed = 1;
    unsigned threads = 1;
    bool strict = false;

    // embedding
    double p = 1.0;
    double q = 1.0;
    unsigned walk_length = 80;
    unsigned walks_per_node = 10;
    unsigned window = 10;
    unsigned negatives = 5;
    unsigned epochs = 5;
    double learning_rate = 0.025;
    unsigned dim = 64;

    // ranking
    double damping = 0.85;
    double epsilon = 1e-6;
    unsigned max_iter = 200;
    std::int64_t beta_minutes = 360;
    std::optional<double> w_retweet;  // unset: per-view default
    std::optional<double> w_reply;
    std::optional<double> w_mention;
    std::optional<double> w_other;
    std::string schedule = "jacobi";

    // simulation
    double p_infect = 0.05;
    double p_recover = 0.1;
    std::size_t seed_count = 50;
    std::size_t trials = 100;
    std::optional<std::size_t> horizon;
    std::string sir_mode = "cumulative";

    Node2VecParams node2vec_params() const;
    NodeRankParams noderank_params(View view) const;
    PageRankParams pagerank_params() const;
    SirParams sir_params() const;
};

struct ConfigField {
    std::string_view key;
    std::string_view group;
    std::string_view help;
    bool is_flag = false;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

/// All settable keys in serialization order.
const std::vector<ConfigField>& config_fields();

/// Sets one key; dashes and underscores are interchangeable in keys.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Applies `key = value` lines on top of `config`. Blank lines and lines
/// starting with '#' are skipped.
void apply_config_text(RunConfig& config, std::string_view text);

/// One `key=value` line per field, in config_fields() order.
std::string serialize(const RunConfig& config);

/// Parses "retweet" etc. Throws ConfigError on anything else.
View parse_view_setting(std::string_view name);

}  // namespace noderank::app

#pragma once

// Test-only reference implementations. None of these share code with the
// library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

/// One dissemination edge in dense form: u informed v at `slot`.
struct DenseEdge {
    int informer;
    int receiver;
    int slot;
    double factor;  // omega * mu
};

struct DenseResult {
    std::vector<double> scores;
    int iterations = 0;
};

/// NodeRank evaluated with full n x n x slots tables, directly from the
/// collection / distribution / offering equations plus damping re-injection.
inline DenseResult dense_noderank(int n, const std::vector<DenseEdge>& edges, double d, double eps, int max_iter) {
    int slots = 1;
    for (const auto& e : edges) slots = std::max(slots, e.slot + 1);
    // arrival[i][u]: slot at which u informed i, -1 if never
    std::vector<std::vector<int>> arrival(n, std::vector<int>(n, -1));
    std::vector<std::vector<double>> factor(n, std::vector<double>(n, 0.0));
    for (const auto& e : edges) {
        arrival[e.receiver][e.informer] = e.slot;
        factor[e.receiver][e.informer] = e.factor;
    }
    std::vector<int> L(n, 0);
    for (int i = 0; i < n; ++i)
        for (int u = 0; u < n; ++u) L[i] += arrival[i][u] >= 0;

    // F[i][u][s]
    std::vector<std::vector<std::vector<double>>> F(
        n, std::vector<std::vector<double>>(n, std::vector<double>(slots, 0.0)));
    for (int i = 0; i < n; ++i) {
        for (int s = 0; s < slots; ++s) {
            bool broadcast = false;
            for (int j = 0; j < n; ++j) broadcast = broadcast || arrival[j][i] == s;
            if (!broadcast) continue;
            int known = 0;
            for (int u = 0; u < n; ++u) known += arrival[i][u] >= 0 && arrival[i][u] <= s;
            for (int u = 0; u < n; ++u) {
                if (arrival[i][u] >= 0 && arrival[i][u] <= s) F[i][u][s] = factor[i][u] / known;
            }
        }
    }

    std::vector<std::vector<double>> O(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int u = 0; u < n; ++u)
            if (arrival[i][u] >= 0) O[i][u] = (1.0 - d) / (n * L[i]);

    DenseResult result;
    std::vector<double> prev(n, 0.0);
    std::vector<std::vector<double>> P(n, std::vector<double>(slots, 0.0));
    for (int k = 1; k <= max_iter; ++k) {
        std::vector<double> score(n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int s = 0; s < slots; ++s) {
                double sum = 0.0;
                for (int j = 0; j < n; ++j)
                    if (arrival[j][i] == s) sum += O[j][i];
                P[i][s] = sum;
                score[i] += sum;
            }
        }
        for (int i = 0; i < n; ++i) {
            for (int u = 0; u < n; ++u) {
                if (arrival[i][u] < 0) continue;
                double fp = 0.0;
                for (int s = 0; s < slots; ++s) fp += F[i][u][s] * P[i][s];
                O[i][u] = (1.0 - d) / (n * L[i]) + d * fp;
            }
        }
        double delta = 0.0;
        for (int i = 0; i < n; ++i) delta += std::abs(score[i] - prev[i]);
        prev = score;
        result.iterations = k;
        if (delta < eps) break;
    }
    result.scores = prev;
    return result;
}

/// Power iteration on the explicit Google matrix G = d * (A + dangling) + (1-d)/N.
inline std::vector<double> dense_pagerank(int n, const std::vector<std::pair<int, int>>& links, double d,
                                          double eps, int max_iter) {
    std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));  // M[v][u] = prob u -> v
    std::vector<int> outdeg(n, 0);
    for (const auto& [u, v] : links) ++outdeg[u];
    for (const auto& [u, v] : links) M[v][u] += 1.0 / outdeg[u];
    for (int u = 0; u < n; ++u) {
        if (outdeg[u] == 0)
            for (int v = 0; v < n; ++v) M[v][u] = 1.0 / n;
    }
    std::vector<std::vector<double>> G(n, std::vector<double>(n));
    for (int v = 0; v < n; ++v)
        for (int u = 0; u < n; ++u) G[v][u] = d * M[v][u] + (1.0 - d) / n;
    std::vector<double> x(n, 1.0 / n);
    for (int k = 0; k < max_iter; ++k) {
        std::vector<double> y(n, 0.0);
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u) y[v] += G[v][u] * x[u];
        double delta = 0.0;
        for (int v = 0; v < n; ++v) delta += std::abs(y[v] - x[v]);
        x = y;
        if (delta < eps) break;
    }
    return x;
}

/// Stationary vector by Gaussian elimination on (I - G) x = 0, sum x = 1.
inline std::vector<double> pagerank_linear_solve(int n, const std::vector<std::pair<int, int>>& links, double d) {
    std::vector<int> outdeg(n, 0);
    for (const auto& [u, v] : links) ++outdeg[u];
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    // x = d M x + (1-d)/N  (with dangling columns uniform)
    for (int v = 0; v < n; ++v) {
        A[v][v] = 1.0;
        A[v][n] = (1.0 - d) / n;
    }
    for (const auto& [u, v] : links) A[v][u] -= d / outdeg[u];
    for (int u = 0; u < n; ++u)
        if (outdeg[u] == 0)
            for (int v = 0; v < n; ++v) A[v][u] -= d / n;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (int k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
        }
    }
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = A[i][n] / A[i][i];
    return x;
}

/// Exact expected number of ever-infected nodes for the discrete SIR
/// process, by propagating the distribution over all 3^n joint states.
/// arcs: (u, v, slot) meaning u can infect v once the step reaches slot.
inline double exact_sir_mean_final(int n, const std::vector<std::tuple<int, int, int>>& arcs,
                                   const std::vector<int>& seeds, double p_inf, double p_rec, int horizon,
                                   bool cumulative = true) {
    // state encoding: base-3 digits, 0 = S, 1 = I, 2 = R
    std::map<std::vector<int>, double> dist;
    std::vector<int> start(n, 0);
    for (int s : seeds) start[s] = 1;
    dist[start] = 1.0;
    for (int step = 1; step <= horizon; ++step) {
        std::map<std::vector<int>, double> next;
        for (const auto& [state, prob] : dist) {
            // per-node transition probabilities, independent across nodes
            std::vector<double> p_change(n, 0.0);
            for (int v = 0; v < n; ++v) {
                if (state[v] == 0) {
                    int attempts = 0;
                    for (const auto& [a, b, slot] : arcs) {
                        const bool active = cumulative ? slot <= step : slot == step;
                        if (b == v && state[a] == 1 && active) ++attempts;
                    }
                    p_change[v] = 1.0 - std::pow(1.0 - p_inf, attempts);
                } else if (state[v] == 1) {
                    p_change[v] = p_rec;
                }
            }
            // enumerate change subsets among nodes with 0 < p < 1
            std::vector<int> movable;
            std::vector<int> fixed_state = state;
            double base = prob;
            for (int v = 0; v < n; ++v) {
                if (p_change[v] <= 0.0) continue;
                if (p_change[v] >= 1.0) {
                    fixed_state[v] = state[v] + 1;
                    continue;
                }
                movable.push_back(v);
            }
            const int m = static_cast<int>(movable.size());
            for (int mask = 0; mask < (1 << m); ++mask) {
                std::vector<int> s2 = fixed_state;
                double p = base;
                for (int b = 0; b < m; ++b) {
                    const int v = movable[b];
                    if (mask & (1 << b)) {
                        s2[v] = state[v] + 1;
                        p *= p_change[v];
                    } else {
                        p *= 1.0 - p_change[v];
                    }
                }
                next[s2] += p;
            }
        }
        dist.swap(next);
    }
    double mean = 0.0;
    for (const auto& [state, prob] : dist) {
        int reached = 0;
        for (int v : state) reached += v != 0;
        mean += prob * reached;
    }
    return mean;
}

/// Higgs-like activity text: `userA userB timestamp action` lines from a
/// few dense communities over one week, with duplicates and self-loops.
inline std::string synthetic_activity(std::uint64_t seed, int users = 300, int lines = 4000) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> user(1, users);
    std::uniform_int_distribution<int> community(0, 4);
    std::uniform_int_distribution<long long> when(1341100800, 1341100800 + 7 * 86400);
    std::discrete_distribution<int> action({5, 2, 3});
    const char* tokens[] = {"RT", "RE", "MT"};
    std::ostringstream out;
    for (int k = 0; k < lines; ++k) {
        int a = user(gen);
        int b = user(gen);
        // bias toward within-community pairs so a sizeable SCC exists
        if (k % 3 != 0) {
            const int c = community(gen);
            a = 1 + (c * users / 5 + (a % (users / 5)));
            b = 1 + (c * users / 5 + (b % (users / 5)));
        }
        if (k % 97 == 0) b = a;
        out << a << ' ' << b << ' ' << when(gen) << ' ' << tokens[action(gen)] << '\n';
    }
    return out.str();
}

}  // namespace oracle

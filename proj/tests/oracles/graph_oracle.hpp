#pragma once

// Adjacency-matrix reference implementations for small graphs.

#include <cstddef>
#include <map>
#include <queue>
#include <vector>

namespace oracle {

struct dense_graph {
    std::size_t n = 0;
    std::vector<std::vector<bool>> adj;

    explicit dense_graph(std::size_t nodes) : n(nodes), adj(nodes, std::vector<bool>(nodes, false)) {}

    void link(std::size_t a, std::size_t b) {
        if (a == b) return;
        adj[a][b] = adj[b][a] = true;
    }

    std::size_t degree(std::size_t v) const {
        std::size_t k = 0;
        for (std::size_t w = 0; w < n; ++w) k += adj[v][w];
        return k;
    }
};

inline double local_clustering(const dense_graph& g, std::size_t v) {
    std::vector<std::size_t> nb;
    for (std::size_t w = 0; w < g.n; ++w) {
        if (g.adj[v][w]) nb.push_back(w);
    }
    if (nb.size() < 2) return 0.0;
    std::size_t links = 0;
    for (std::size_t a = 0; a < nb.size(); ++a) {
        for (std::size_t b = a + 1; b < nb.size(); ++b) links += g.adj[nb[a]][nb[b]];
    }
    const double k = static_cast<double>(nb.size());
    return static_cast<double>(2 * links) / (k * (k - 1.0));
}

/// `nodes` is the count of non-isolated nodes.
inline double normalized_clustering(const dense_graph& g, std::size_t v, std::size_t nodes) {
    const auto k = g.degree(v);
    if (k == 0) return 0.0;
    return local_clustering(g, v) / (static_cast<double>(k) / static_cast<double>(nodes - 1));
}

inline std::vector<int> bfs_depths(const dense_graph& g, std::size_t src, const std::vector<bool>& allowed) {
    std::vector<int> depth(g.n, -1);
    std::queue<std::size_t> q;
    depth[src] = 0;
    q.push(src);
    while (!q.empty()) {
        const auto v = q.front();
        q.pop();
        for (std::size_t w = 0; w < g.n; ++w) {
            if (g.adj[v][w] && allowed[w] && depth[w] < 0) {
                depth[w] = depth[v] + 1;
                q.push(w);
            }
        }
    }
    return depth;
}

inline std::size_t within_two(const dense_graph& g, std::size_t v) {
    const auto depth = bfs_depths(g, v, std::vector<bool>(g.n, true));
    std::size_t count = 0;
    for (std::size_t w = 0; w < g.n; ++w) {
        if (w != v && depth[w] >= 1 && depth[w] <= 2) ++count;
    }
    return count;
}

inline std::size_t ego_parts(const dense_graph& g, std::size_t v) {
    std::vector<bool> allowed(g.n, false);
    for (std::size_t w = 0; w < g.n; ++w) allowed[w] = g.adj[v][w];
    std::vector<bool> seen(g.n, false);
    std::size_t parts = 0;
    for (std::size_t w = 0; w < g.n; ++w) {
        if (!allowed[w] || seen[w]) continue;
        ++parts;
        const auto depth = bfs_depths(g, w, allowed);
        for (std::size_t x = 0; x < g.n; ++x) {
            if (depth[x] >= 0) seen[x] = true;
        }
    }
    return parts;
}

/// Component sizes over non-isolated nodes, as size -> count.
inline std::map<std::size_t, std::size_t> component_sizes(const dense_graph& g) {
    std::map<std::size_t, std::size_t> sizes;
    std::vector<bool> seen(g.n, false);
    const std::vector<bool> all(g.n, true);
    for (std::size_t v = 0; v < g.n; ++v) {
        if (seen[v] || g.degree(v) == 0) continue;
        const auto depth = bfs_depths(g, v, all);
        std::size_t size = 0;
        for (std::size_t x = 0; x < g.n; ++x) {
            if (depth[x] >= 0) {
                seen[x] = true;
                ++size;
            }
        }
        ++sizes[size];
    }
    return sizes;
}

} // namespace oracle

#include "cotravel/netstats.hpp"

#include "cotravel/error.hpp"

#include <algorithm>
#include <numeric>

namespace cotravel {

graph::graph(const threshold_network& g) : ids_(g.nodes) {
    const auto n = ids_.size();
    std::vector<std::size_t> degree(n, 0);
    std::vector<std::pair<node_index, node_index>> ends;
    ends.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        auto a = index_of(e.u);
        auto b = index_of(e.v);
        if (!a || !b) throw error(error_kind::consistency, "edge endpoint missing from node set");
        if (*a == *b) continue;
        ends.emplace_back(*a, *b);
        ++degree[*a];
        ++degree[*b];
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    adjacency_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (auto [a, b] : ends) {
        adjacency_[fill[a]++] = b;
        adjacency_[fill[b]++] = a;
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
        auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
        std::sort(first, last);
    }
}

std::optional<node_index> graph::index_of(passenger_id p) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), p);
    if (it == ids_.end() || *it != p) return std::nullopt;
    return static_cast<node_index>(it - ids_.begin());
}

namespace {

struct disjoint_sets {
    std::vector<node_index> parent;
    std::vector<std::size_t> size;

    explicit disjoint_sets(std::size_t n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0); }

    node_index find(node_index x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(node_index a, node_index b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

// Visits every node present in both sorted adjacency rows.
template <class F>
void for_common(std::span<const node_index> a, std::span<const node_index> b, F&& f) {
    auto i = a.begin();
    auto k = b.begin();
    while (i != a.end() && k != b.end()) {
        if (*i < *k) {
            ++i;
        } else if (*k < *i) {
            ++k;
        } else {
            f(*i);
            ++i;
            ++k;
        }
    }
}

struct scratch {
    std::vector<std::uint32_t> stamp;
    std::uint32_t round = 0;

    explicit scratch(std::size_t n) : stamp(n, 0) {}

    void next() {
        if (++round == 0) {
            std::fill(stamp.begin(), stamp.end(), 0);
            round = 1;
        }
    }
};

std::size_t two_hop_with(const graph& g, node_index n, scratch& s) {
    s.next();
    s.stamp[n] = s.round;
    std::size_t count = 0;
    for (auto j : g.neighbors(n)) {
        if (s.stamp[j] != s.round) {
            s.stamp[j] = s.round;
            ++count;
        }
        for (auto m : g.neighbors(j)) {
            if (s.stamp[m] != s.round) {
                s.stamp[m] = s.round;
                ++count;
            }
        }
    }
    return count;
}

} // namespace

component_stats components(const graph& g) {
    component_stats out;
    const auto n = g.node_count();
    if (n == 0) return out;
    disjoint_sets ds(n);
    for (node_index i = 0; i < n; ++i) {
        for (auto j : g.neighbors(i)) {
            if (i < j) ds.unite(i, j);
        }
    }
    std::size_t largest = 0;
    for (node_index i = 0; i < n; ++i) {
        if (ds.find(i) != i) continue;
        ++out.count;
        ++out.size_histogram[ds.size[i]];
        largest = std::max(largest, ds.size[i]);
    }
    out.largest_fraction = static_cast<double>(largest) / static_cast<double>(n);
    return out;
}

histogram degree_histogram(const graph& g) {
    histogram h;
    for (node_index i = 0; i < g.node_count(); ++i) ++h[g.degree(i)];
    return h;
}

clustering_coefficient clustering(const graph& g, node_index n) {
    clustering_coefficient out;
    const auto k = g.degree(n);
    if (k < 2) return out;
    const auto mine = g.neighbors(n);
    std::size_t twice_links = 0;
    for (auto j : mine) for_common(mine, g.neighbors(j), [&](node_index) { ++twice_links; });
    const auto kd = static_cast<double>(k);
    out.local = static_cast<double>(twice_links) / (kd * (kd - 1.0));
    out.normalized = out.local / (kd / static_cast<double>(g.node_count() - 1));
    return out;
}

std::size_t two_hop(const graph& g, node_index n) {
    scratch s(g.node_count());
    return two_hop_with(g, n, s);
}

std::size_t ego_components(const graph& g, node_index n) {
    const auto mine = g.neighbors(n);
    if (mine.empty()) return 0;
    disjoint_sets ds(mine.size());
    for (std::size_t a = 0; a < mine.size(); ++a) {
        for_common(mine, g.neighbors(mine[a]), [&](node_index w) {
            const auto b = static_cast<std::size_t>(std::lower_bound(mine.begin(), mine.end(), w) - mine.begin());
            ds.unite(static_cast<node_index>(a), static_cast<node_index>(b));
        });
    }
    std::size_t count = 0;
    for (std::size_t a = 0; a < mine.size(); ++a) {
        if (ds.find(static_cast<node_index>(a)) == a) ++count;
    }
    return count;
}

node_features node_feature_means(const graph& g, std::size_t threads) {
    const auto n = g.node_count();
    if (n == 0) throw error(error_kind::config, "node feature means of an empty graph");

    // Fixed chunking keeps the floating-point summation order independent of thread count.
    constexpr std::size_t kChunk = 4096;
    const auto chunks = (n + kChunk - 1) / kChunk;
    std::vector<node_features> partial(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
        scratch s(n);
        auto& acc = partial[c];
        const auto end = std::min(n, (c + 1) * kChunk);
        for (auto i = static_cast<node_index>(c * kChunk); i < end; ++i) {
            const auto cc = clustering(g, i);
            acc.degree += static_cast<double>(g.degree(i));
            acc.two_hop += static_cast<double>(two_hop_with(g, i, s));
            acc.clustering += cc.local;
            acc.normalized_clustering += cc.normalized;
            acc.ego_components += static_cast<double>(ego_components(g, i));
        }
    });
    node_features total;
    for (const auto& p : partial) {
        total.degree += p.degree;
        total.two_hop += p.two_hop;
        total.clustering += p.clustering;
        total.normalized_clustering += p.normalized_clustering;
        total.ego_components += p.ego_components;
    }
    const auto nd = static_cast<double>(n);
    total.degree /= nd;
    total.two_hop /= nd;
    total.clustering /= nd;
    total.normalized_clustering /= nd;
    total.ego_components /= nd;
    return total;
}

double mean_degree_over_universe(const graph& g, std::size_t universe_size) {
    if (universe_size == 0) return 0.0;
    if (universe_size < g.node_count()) throw error(error_kind::config, "universe smaller than the graph");
    return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(universe_size);
}

network_summary summarize(const graph& g, const network_size& reference) {
    network_summary s;
    s.node_count = g.node_count();
    s.edge_count = g.edge_count();
    s.fractional_nodes = reference.nodes ? static_cast<double>(s.node_count) / static_cast<double>(reference.nodes) : 0.0;
    s.fractional_edges = reference.edges ? static_cast<double>(s.edge_count) / static_cast<double>(reference.edges) : 0.0;
    const auto comps = components(g);
    s.component_count = comps.count;
    s.largest_component_fraction = comps.largest_fraction;
    s.component_size_histogram = comps.size_histogram;
    s.degree_histogram = degree_histogram(g);
    return s;
}

} // namespace cotravel

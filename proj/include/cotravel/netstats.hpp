#pragma once

// Network-level and node-level statistics over threshold networks.

#include "cotravel/network_builder.hpp"
#include "cotravel/record_model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cotravel {

using node_index = std::uint32_t;

/// Compressed adjacency over the non-isolated nodes of a threshold network.
class graph {
public:
    graph() = default;
    explicit graph(const threshold_network& g);

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return adjacency_.size() / 2; }

    std::span<const node_index> neighbors(node_index n) const {
        return {adjacency_.data() + offsets_[n], adjacency_.data() + offsets_[n + 1]};
    }
    std::size_t degree(node_index n) const { return offsets_[n + 1] - offsets_[n]; }

    passenger_id id(node_index n) const { return ids_[n]; }
    std::optional<node_index> index_of(passenger_id p) const;

private:
    std::vector<passenger_id> ids_;       // ascending
    std::vector<std::size_t> offsets_;    // size node_count + 1
    std::vector<node_index> adjacency_;   // each row ascending
};

struct component_stats {
    std::size_t count = 0;
    double largest_fraction = 0.0;
    histogram size_histogram;  // component size -> number of components
};

component_stats components(const graph& g);

histogram degree_histogram(const graph& g);

struct clustering_coefficient {
    double local = 0.0;       // 2|e| / (k (k - 1)), 0 when k < 2
    double normalized = 0.0;  // local / (k / (N - 1)), 0 when k = 0
};

clustering_coefficient clustering(const graph& g, node_index n);

/// Distinct nodes within two hops, excluding the node itself.
std::size_t two_hop(const graph& g, node_index n);

/// Connected components among the node's neighbors once the node is removed.
std::size_t ego_components(const graph& g, node_index n);

struct node_features {
    double degree = 0.0;
    double two_hop = 0.0;
    double clustering = 0.0;
    double normalized_clustering = 0.0;
    double ego_components = 0.0;
};

/// Means over all (non-isolated) nodes. Throws error_kind::config on an empty graph.
node_features node_feature_means(const graph& g, std::size_t threads = 1);

/// 2|E| / universe_size: mean degree when isolated nodes of a fixed universe are kept.
double mean_degree_over_universe(const graph& g, std::size_t universe_size);

struct network_summary {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double fractional_nodes = 0.0;
    double fractional_edges = 0.0;
    std::size_t component_count = 0;
    double largest_component_fraction = 0.0;
    histogram component_size_histogram;
    histogram degree_histogram;
};

/// Sizes are reported relative to `reference` (normally the unfiltered network).
network_summary summarize(const graph& g, const network_size& reference);

} // namespace cotravel

#pragma once

#include "cotravel/record_model.hpp"
#include "cotravel/tie_counter.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cotravel {

enum class measure : std::uint8_t { co_sfpg, co_pnr, co_jny, co_flight };

const char* to_string(measure m);
std::optional<measure> parse_measure(std::string_view s);

/// Smallest legal threshold for a measure: 1 for the booking counts, 0 for co-journeys and
/// the co-flight baseline (whose threshold is strict).
std::int64_t min_tau(measure m);

struct weighted_edge {
    passenger_id u{};
    passenger_id v{};
    std::uint32_t weight = 0;

    friend bool operator==(const weighted_edge&, const weighted_edge&) = default;
};

struct threshold_network {
    measure kind = measure::co_sfpg;
    std::int64_t tau = 1;
    std::vector<passenger_id> nodes;   // non-isolated only, ascending
    std::vector<weighted_edge> edges;  // ascending by (u, v)
};

std::uint32_t weight_of(const tie_record& t, measure m);

/// Edges whose count reaches tau. Throws error_kind::config for an illegal tau or
/// for co_flight, which is built from a dataset instead.
threshold_network build_network(std::span<const tie_record> ties, measure m, std::int64_t tau);

/// Keeps edges of a weighted list: weight >= tau, or weight > tau when strict.
threshold_network filter_edges(std::span<const weighted_edge> edges, measure m, std::int64_t tau, bool strict);

/// Co-flight link counts: one link per passenger pair per flight, where a flight manifest is the
/// union of SFPG passenger sets sharing (flight_id, flight_date).
std::vector<weighted_edge> co_flight_counts(const dataset& d, std::size_t max_manifest = 500);

/// Baseline network: an edge wherever two passengers shared more than t flights.
threshold_network co_flight_baseline(const dataset& d, std::int64_t t, std::size_t max_manifest = 500);

struct network_size {
    std::int64_t tau = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
};

struct tau_range {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

/// Parses `A..B` or a single `A`.
std::optional<tau_range> parse_tau_range(std::string_view s);

using network_hook = std::function<void(const threshold_network&)>;

/// One summary per tau, ascending. The hook, when given, sees every network and may run
/// concurrently for different tau values.
std::vector<network_size> sweep(std::span<const tie_record> ties, measure m, tau_range range,
                                const network_hook& hook = {}, std::size_t threads = 1);

std::vector<network_size> sweep_edges(std::span<const weighted_edge> edges, measure m, tau_range range,
                                      const network_hook& hook = {}, std::size_t threads = 1);

/// CSV `u,v,weight`.
void write_edges_csv(std::ostream& out, const threshold_network& g);

/// Runs fn(i) for i in [0, n) over a small pool of threads.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

} // namespace cotravel

#include "cotravel/network_builder.hpp"

#include "cotravel/error.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>

#include <absl/container/flat_hash_map.h>

namespace cotravel {

const char* to_string(measure m) {
    switch (m) {
    case measure::co_sfpg: return "cosfpg";
    case measure::co_pnr: return "copnr";
    case measure::co_jny: return "cojny";
    case measure::co_flight: return "coflight";
    }
    return "?";
}

std::optional<measure> parse_measure(std::string_view s) {
    if (s == "cosfpg") return measure::co_sfpg;
    if (s == "copnr") return measure::co_pnr;
    if (s == "cojny") return measure::co_jny;
    if (s == "coflight") return measure::co_flight;
    return std::nullopt;
}

std::int64_t min_tau(measure m) { return m == measure::co_sfpg || m == measure::co_pnr ? 1 : 0; }

std::uint32_t weight_of(const tie_record& t, measure m) {
    switch (m) {
    case measure::co_sfpg: return t.co_sfpg;
    case measure::co_pnr: return t.co_pnr;
    case measure::co_jny: return t.co_jny;
    case measure::co_flight: break;
    }
    throw error(error_kind::config, "co-flight weights are not carried on tie records");
}

namespace {

void check_tau(measure m, std::int64_t tau) {
    if (tau < min_tau(m)) {
        throw error(error_kind::config, std::string("tau ") + std::to_string(tau) + " is below the minimum " +
                                            std::to_string(min_tau(m)) + " for measure " + to_string(m));
    }
}

void collect_nodes(threshold_network& g) {
    g.nodes.reserve(g.edges.size() * 2);
    for (const auto& e : g.edges) {
        g.nodes.push_back(e.u);
        g.nodes.push_back(e.v);
    }
    std::sort(g.nodes.begin(), g.nodes.end());
    g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
    g.nodes.shrink_to_fit();
}

bool edge_less(const weighted_edge& a, const weighted_edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); }

std::vector<weighted_edge> tie_weights(std::span<const tie_record> ties, measure m) {
    std::vector<weighted_edge> out;
    out.reserve(ties.size());
    for (const auto& t : ties) out.push_back({t.pair.u, t.pair.v, weight_of(t, m)});
    std::sort(out.begin(), out.end(), edge_less);
    return out;
}

} // namespace

threshold_network filter_edges(std::span<const weighted_edge> edges, measure m, std::int64_t tau, bool strict) {
    check_tau(m, tau);
    threshold_network g;
    g.kind = m;
    g.tau = tau;
    for (const auto& e : edges) {
        const auto w = static_cast<std::int64_t>(e.weight);
        if (strict ? w > tau : w >= tau) g.edges.push_back(e);
    }
    if (!std::is_sorted(g.edges.begin(), g.edges.end(), edge_less)) std::sort(g.edges.begin(), g.edges.end(), edge_less);
    collect_nodes(g);
    return g;
}

threshold_network build_network(std::span<const tie_record> ties, measure m, std::int64_t tau) {
    if (m == measure::co_flight) {
        throw error(error_kind::config, "co-flight networks are built from a dataset, not from ties");
    }
    check_tau(m, tau);
    threshold_network g;
    g.kind = m;
    g.tau = tau;
    for (const auto& t : ties) {
        const auto w = weight_of(t, m);
        if (static_cast<std::int64_t>(w) >= tau) g.edges.push_back({t.pair.u, t.pair.v, w});
    }
    std::sort(g.edges.begin(), g.edges.end(), edge_less);
    collect_nodes(g);
    return g;
}

std::vector<weighted_edge> co_flight_counts(const dataset& d, std::size_t max_manifest) {
    // Records are sorted by (date, flight_id), so each flight is one contiguous run.
    absl::flat_hash_map<passenger_pair, std::uint32_t> links;
    const auto records = d.records();
    std::vector<passenger_id> manifest;
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t k = i;
        manifest.clear();
        while (k < records.size() && records[k].flight_date == records[i].flight_date &&
               records[k].flight_id == records[i].flight_id) {
            manifest.insert(manifest.end(), records[k].passengers.begin(), records[k].passengers.end());
            ++k;
        }
        std::sort(manifest.begin(), manifest.end());
        manifest.erase(std::unique(manifest.begin(), manifest.end()), manifest.end());
        if (manifest.size() > max_manifest) {
            throw error(error_kind::capacity, "flight " + records[i].flight_id + " on " +
                                                  records[i].flight_date.to_iso() + " has " +
                                                  std::to_string(manifest.size()) +
                                                  " passengers, above the manifest cap of " +
                                                  std::to_string(max_manifest));
        }
        for (std::size_t a = 0; a < manifest.size(); ++a) {
            for (std::size_t b = a + 1; b < manifest.size(); ++b) ++links[passenger_pair{manifest[a], manifest[b]}];
        }
        i = k;
    }
    std::vector<weighted_edge> out;
    out.reserve(links.size());
    for (const auto& [pair, n] : links) out.push_back({pair.u, pair.v, n});
    std::sort(out.begin(), out.end(), edge_less);
    return out;
}

threshold_network co_flight_baseline(const dataset& d, std::int64_t t, std::size_t max_manifest) {
    const auto counts = co_flight_counts(d, max_manifest);
    return filter_edges(counts, measure::co_flight, t, true);
}

std::optional<tau_range> parse_tau_range(std::string_view s) {
    auto parse_int = [](std::string_view part, std::int64_t& out) {
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
        return !part.empty() && ec == std::errc{} && ptr == part.data() + part.size();
    };
    tau_range r;
    const auto dots = s.find("..");
    if (dots == std::string_view::npos) {
        if (!parse_int(s, r.lo)) return std::nullopt;
        r.hi = r.lo;
        return r;
    }
    if (!parse_int(s.substr(0, dots), r.lo) || !parse_int(s.substr(dots + 2), r.hi) || r.hi < r.lo) {
        return std::nullopt;
    }
    return r;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(threads);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (auto i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
                } catch (...) {
                    failures[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
}

std::vector<network_size> sweep_edges(std::span<const weighted_edge> edges, measure m, tau_range range,
                                      const network_hook& hook, std::size_t threads) {
    if (range.hi < range.lo) throw error(error_kind::config, "empty tau range");
    check_tau(m, range.lo);
    const bool strict = m == measure::co_flight;
    const auto n = static_cast<std::size_t>(range.hi - range.lo + 1);
    std::vector<network_size> out(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const auto tau = range.lo + static_cast<std::int64_t>(i);
        const auto g = filter_edges(edges, m, tau, strict);
        out[i] = {tau, g.nodes.size(), g.edges.size()};
        if (hook) hook(g);
    });
    return out;
}

std::vector<network_size> sweep(std::span<const tie_record> ties, measure m, tau_range range,
                                const network_hook& hook, std::size_t threads) {
    const auto edges = tie_weights(ties, m);
    return sweep_edges(edges, m, range, hook, threads);
}

void write_edges_csv(std::ostream& out, const threshold_network& g) {
    out << "u,v,weight\n";
    for (const auto& e : g.edges) out << raw(e.u) << ',' << raw(e.v) << ',' << e.weight << '\n';
}

} // namespace cotravel

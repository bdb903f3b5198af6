#include "cotravel/inference.hpp"

#include "cotravel/error.hpp"

#include <algorithm>
#include <iterator>
#include <thread>

namespace cotravel {

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

void sort_events(std::vector<cojourney_event>& events) {
    std::stable_sort(events.begin(), events.end(),
                     [](const cojourney_event& a, const cojourney_event& b) { return a.pair < b.pair; });
}

struct pair_visit {
    passenger_pair pair;
    std::uint32_t record = 0;
};

constexpr std::size_t kVisitsPerBucket = std::size_t{1} << 18;

// Every shared SFPG of every pair in the shard, split by pair hash into buckets small enough for
// their pair states to stay cache resident. Each bucket keeps chronological order.
std::vector<std::vector<pair_visit>> bucketed_visits(std::span<const sfpg_record> records, std::size_t shards,
                                                     std::size_t shard) {
    std::size_t total = 0;
    for (const auto& r : records) total += r.size() * (r.size() - 1) / 2;
    const std::size_t buckets = std::max<std::size_t>(1, total / shards / kVisitsPerBucket);

    auto bucket_of = [&](const passenger_pair& p) {
        return static_cast<std::size_t>(mix(raw(p.v) * 0xff51afd7ed558ccdull ^ mix(raw(p.u) + 1)) % buckets);
    };
    std::vector<std::vector<pair_visit>> out(buckets);
    for (auto& b : out) b.reserve(total / shards / buckets + total / shards / buckets / 8 + 16);
    for (std::uint32_t i = 0; i < records.size(); ++i) {
        const auto& pax = records[i].passengers;
        for (std::size_t a = 0; a < pax.size(); ++a) {
            for (std::size_t b = a + 1; b < pax.size(); ++b) {
                const passenger_pair pair{pax[a], pax[b]};
                if (shards > 1 && shard_of(pair, shards) != shard) continue;
                out[bucket_of(pair)].push_back({pair, i});
            }
        }
    }
    return out;
}

} // namespace

std::size_t shard_of(const passenger_pair& pair, std::size_t shard_count) {
    return static_cast<std::size_t>(mix(raw(pair.u) * 0x100000001b3ull ^ mix(raw(pair.v))) % shard_count);
}

void check_group_sizes(std::span<const sfpg_record> records, std::size_t max_group_size) {
    for (const auto& r : records) {
        if (r.size() > max_group_size) {
            throw error(error_kind::capacity, "SFPG " + r.sfpg_id + " has " + std::to_string(r.size()) +
                                                  " passengers, above the pair-enumeration cap of " +
                                                  std::to_string(max_group_size));
        }
    }
}

pair_tracker::pair_tracker(thresholds th, tracker_options opts) : th_(std::move(th)), opts_(opts) {
    th_.validate();
    if (opts_.shard_count == 0 || opts_.shard_index >= opts_.shard_count) {
        throw error(error_kind::config, "invalid shard assignment");
    }
}

void pair_tracker::step(const passenger_pair& pair, const sfpg_record& cur) {
    auto& state = states_[pair];
    count_simple(state, cur);
    step_pair(state, cur, th_, opts_.collect_events, [&](const open_journey& j, closure why) {
        count_cojourney(state, j.type);
        if (opts_.collect_events) events_.push_back(make_event(pair, j, why));
    });
}

void pair_tracker::advance(std::span<const sfpg_record> records) {
    check_group_sizes(records, opts_.max_group_size);
    const bool sharded = opts_.shard_count > 1;
    for (const auto& cur : records) {
        const auto& pax = cur.passengers;
        for (std::size_t a = 0; a < pax.size(); ++a) {
            for (std::size_t b = a + 1; b < pax.size(); ++b) {
                const passenger_pair pair{pax[a], pax[b]};  // passengers are sorted
                if (sharded && shard_of(pair, opts_.shard_count) != opts_.shard_index) continue;
                step(pair, cur);
            }
        }
    }
}

void pair_tracker::flush() {
    for (auto& [pair, state] : states_) {
        if (state.phase == pair_phase::outside) continue;
        const auto& j = *state.journey;
        count_cojourney(state, j.type);
        if (opts_.collect_events) events_.push_back(make_event(pair, j, closure::window_end));
        state.journey.reset();
        state.phase = pair_phase::outside;
    }
}

std::vector<cojourney_event> pair_tracker::take_events() {
    auto out = std::move(events_);
    events_.clear();
    sort_events(out);
    return out;
}

std::vector<tie_record> pair_tracker::ties() const {
    std::vector<tie_record> out;
    out.reserve(states_.size());
    for (const auto& [pair, state] : states_) out.push_back(label_tie(pair, state));
    std::sort(out.begin(), out.end(), [](const tie_record& a, const tie_record& b) { return a.pair < b.pair; });
    return out;
}

const pair_state* pair_tracker::find(const passenger_pair& pair) const {
    auto it = states_.find(pair);
    return it == states_.end() ? nullptr : &it->second;
}

inference_result infer(const dataset& d, const thresholds& th, const inference_options& opts) {
    th.validate();
    if (opts.shards == 0) throw error(error_kind::config, "shard count must be positive");
    check_group_sizes(d.records(), opts.max_group_size);

    std::vector<inference_result> parts(opts.shards);
    auto run_shard = [&](std::size_t shard) {
        const auto visits = bucketed_visits(d.records(), opts.shards, shard);
        auto& out = parts[shard];
        for (const auto& bucket : visits) {
            pair_tracker tracker(th, {opts.collect_events, opts.max_group_size, 1, 0});
            for (const auto& v : bucket) tracker.step(v.pair, d.records()[v.record]);
            tracker.flush();
            const auto ties = tracker.ties();
            out.ties.insert(out.ties.end(), ties.begin(), ties.end());
            auto events = tracker.take_events();
            std::move(events.begin(), events.end(), std::back_inserter(out.events));
        }
        std::sort(out.ties.begin(), out.ties.end(),
                  [](const tie_record& a, const tie_record& b) { return a.pair < b.pair; });
        sort_events(out.events);
    };
    if (opts.shards == 1) {
        run_shard(0);
        return std::move(parts.front());
    }

    std::vector<std::exception_ptr> failures(opts.shards);
    {
        std::vector<std::jthread> workers;
        for (std::size_t s = 0; s < opts.shards; ++s) {
            workers.emplace_back([&, s] {
                try {
                    run_shard(s);
                } catch (...) {
                    failures[s] = std::current_exception();
                }
            });
        }
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    inference_result merged;
    for (auto& p : parts) {
        merged.ties.insert(merged.ties.end(), p.ties.begin(), p.ties.end());
        std::move(p.events.begin(), p.events.end(), std::back_inserter(merged.events));
    }
    std::sort(merged.ties.begin(), merged.ties.end(),
              [](const tie_record& a, const tie_record& b) { return a.pair < b.pair; });
    sort_events(merged.events);
    return merged;
}

std::vector<cojourney_event> discover_cojourneys(const dataset& d, const thresholds& th,
                                                 std::size_t max_group_size) {
    return infer(d, th, {1, true, max_group_size}).events;
}

} // namespace cotravel

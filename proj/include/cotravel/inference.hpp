#pragma once

// Streaming driver: enumerates passenger pairs per SFPG and runs both state machines.

#include "cotravel/journey_engine.hpp"
#include "cotravel/pair_state.hpp"
#include "cotravel/record_model.hpp"
#include "cotravel/tie_counter.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <absl/container/flat_hash_map.h>

namespace cotravel {

struct tracker_options {
    bool collect_events = false;
    std::size_t max_group_size = 500;
    std::size_t shard_count = 1;
    std::size_t shard_index = 0;
};

/// Stable shard assignment for a pair, independent of process and platform.
std::size_t shard_of(const passenger_pair& pair, std::size_t shard_count);

/// Per-pair state for every pair in this tracker's shard. Records handed to advance()
/// must stay alive until flush(); state carries across calls, so a stream may be fed in chunks.
class pair_tracker {
public:
    explicit pair_tracker(thresholds th, tracker_options opts = {});

    void advance(std::span<const sfpg_record> records);

    /// Closes every open journey as window_end.
    void flush();

    std::vector<cojourney_event> take_events();

    /// Labeled ties sorted by pair; call after flush().
    std::vector<tie_record> ties() const;

    const pair_state* find(const passenger_pair& pair) const;
    std::size_t pair_count() const { return states_.size(); }

    /// Advances a single pair by one of its shared SFPGs, bypassing pair enumeration and sharding.
    void step(const passenger_pair& pair, const sfpg_record& cur);

    template <class F>
    void for_each_state(F&& f) const {
        for (const auto& [pair, state] : states_) f(pair, state);
    }

private:
    thresholds th_;
    tracker_options opts_;
    absl::flat_hash_map<passenger_pair, pair_state> states_;
    std::vector<cojourney_event> events_;
};

/// Throws error_kind::capacity when an SFPG exceeds the pair-enumeration cap.
void check_group_sizes(std::span<const sfpg_record> records, std::size_t max_group_size);

struct inference_options {
    std::size_t shards = 1;
    bool collect_events = false;
    std::size_t max_group_size = 500;
};

struct inference_result {
    std::vector<tie_record> ties;           // sorted by pair
    std::vector<cojourney_event> events;    // grouped by pair, chronological within a pair
};

/// Full single-window run. Shards run on separate threads and are merged deterministically.
inference_result infer(const dataset& d, const thresholds& th, const inference_options& opts = {});

} // namespace cotravel

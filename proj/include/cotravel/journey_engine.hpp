#pragma once

// Stage one of co-travel inference: segments each passenger pair's chronological
// stream of shared SFPGs into complete co-journeys.

#include "cotravel/pair_state.hpp"
#include "cotravel/record_model.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace cotravel {

std::map<std::size_t, std::int32_t> default_spg_intervals();

struct thresholds {
    std::size_t t_size = 10;       // groups this large or larger are LPGs
    double t_overlap = 0.7;        // Jaccard overlap meaning "same passenger group"
    std::int32_t t_interval_lpg = 15;
    std::map<std::size_t, std::int32_t> t_interval_spg = default_spg_intervals();  // keyed by group size

    /// Throws error_kind::config on an invalid combination.
    void validate() const;

    /// Timeout in days for a group of the given size.
    std::int32_t interval_for(std::size_t group_size) const;
};

enum class closure : std::uint8_t { return_to_origin, timeout, window_end };

const char* to_string(closure c);

struct cojourney_event {
    passenger_pair pair;
    journey_type type = journey_type::spg;
    std::vector<std::string> sfpg_ids;
    date start_date;
    date end_date;
    closure closed_by = closure::return_to_origin;
};

double overlap(std::span<const passenger_id> a, std::span<const passenger_id> b);

bool cond_is_lpg(const sfpg_record& sfpg, const thresholds& th);
bool cond_overlap(const sfpg_record& cur, std::span<const passenger_id> prev_passengers, const thresholds& th);
bool cond_timeout(const sfpg_record& cur, const open_journey& j, const thresholds& th);
bool cond_goback(const sfpg_record& cur, const open_journey& j);

namespace detail {

inline void open(pair_state& s, const sfpg_record& cur, journey_type type, bool track_members) {
    auto j = std::make_unique<open_journey>();
    j->first = j->last = &cur;
    j->legs = 1;
    j->type = type;
    if (track_members) j->members.push_back(&cur);
    s.journey = std::move(j);
    s.phase = type == journey_type::lpg ? pair_phase::inside_lpg : pair_phase::inside_spg;
}

inline void merge(open_journey& j, const sfpg_record& cur, bool track_members) {
    j.last = &cur;
    ++j.legs;
    if (track_members) j.members.push_back(&cur);
}

template <class Emit>
void close(pair_state& s, closure why, Emit& emit) {
    emit(static_cast<const open_journey&>(*s.journey), why);
    s.journey.reset();
    s.phase = pair_phase::outside;
}

} // namespace detail

/// Advances one pair's journey state machine by one shared SFPG. `emit(journey, closure)`
/// is called for every co-journey the record completes; at most one per call.
template <class Emit>
void step_pair(pair_state& s, const sfpg_record& cur, const thresholds& th, bool track_members, Emit&& emit) {
    for (;;) {
        switch (s.phase) {
        case pair_phase::outside:
            detail::open(s, cur, cond_is_lpg(cur, th) ? journey_type::lpg : journey_type::spg, track_members);
            return;

        case pair_phase::inside_spg: {
            auto& j = *s.journey;
            if (cond_timeout(cur, j, th)) {
                detail::close(s, closure::timeout, emit);
                continue;  // reprocess cur from outside
            }
            const bool back = cond_goback(cur, j);
            detail::merge(j, cur, track_members);
            if (back) detail::close(s, closure::return_to_origin, emit);
            return;
        }

        case pair_phase::inside_lpg: {
            auto& j = *s.journey;
            if (cond_goback(cur, j)) {
                detail::merge(j, cur, track_members);
                detail::close(s, closure::return_to_origin, emit);
                return;
            }
            if (cond_overlap(cur, j.last_passengers(), th) || !cond_timeout(cur, j, th)) {
                detail::merge(j, cur, track_members);
                return;
            }
            detail::close(s, closure::timeout, emit);
            continue;
        }
        }
    }
}

/// Convenience form that materializes events; requires member tracking for sfpg_ids.
std::vector<cojourney_event> step_pair(pair_state& s, const sfpg_record& cur, const thresholds& th,
                                       const passenger_pair& pair);

cojourney_event make_event(const passenger_pair& pair, const open_journey& j, closure why);

/// Runs stage one over a whole dataset. Events are grouped by pair (ascending) and
/// chronological within a pair; journeys still open at the window end close as window_end.
std::vector<cojourney_event> discover_cojourneys(const dataset& d, const thresholds& th,
                                                 std::size_t max_group_size = 500);

/// JSONL with fields pair_u, pair_v, type, closed_by, start_date, end_date, sfpg_ids.
void write_events_jsonl(std::ostream& out, std::span<const cojourney_event> events);

} // namespace cotravel

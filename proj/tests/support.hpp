#pragma once

#include "cotravel/inference.hpp"
#include "cotravel/journey_engine.hpp"
#include "cotravel/record_model.hpp"
#include "oracles/journey_oracle.hpp"

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

using namespace cotravel;

inline const date kEpoch = date::from_ymd(2012, 1, 1);

inline std::vector<passenger_id> ids(std::initializer_list<std::uint64_t> v) {
    std::vector<passenger_id> out;
    for (auto x : v) out.push_back(passenger_id{x});
    return out;
}

inline std::vector<passenger_id> range_ids(std::uint64_t first, std::uint64_t count) {
    std::vector<passenger_id> out;
    for (std::uint64_t k = 0; k < count; ++k) out.push_back(passenger_id{first + k});
    return out;
}

inline sfpg_record rec(std::string sfpg, std::string pnr, int day, std::string from, std::string to,
                       std::vector<passenger_id> people, std::string flight = {}) {
    sfpg_record r;
    r.sfpg_id = std::move(sfpg);
    r.pnr_id = std::move(pnr);
    r.flight_id = flight.empty() ? from + to : std::move(flight);
    r.flight_date = kEpoch + day;
    r.origin = std::move(from);
    r.destination = std::move(to);
    r.passengers = std::move(people);
    return r;
}

inline oracle::flight_group to_oracle(const sfpg_record& r) {
    oracle::flight_group g;
    g.id = r.sfpg_id;
    g.pnr = r.pnr_id;
    g.day = r.flight_date - kEpoch;
    g.from = r.origin;
    g.to = r.destination;
    for (auto p : r.passengers) g.people.insert(raw(p));
    return g;
}

inline std::vector<oracle::flight_group> to_oracle(const dataset& d) {
    std::vector<oracle::flight_group> out;
    for (const auto& r : d.records()) out.push_back(to_oracle(r));
    return out;
}

inline oracle::params to_oracle(const thresholds& th) {
    oracle::params p;
    p.t_size = th.t_size;
    p.t_overlap = th.t_overlap;
    p.lpg_days = th.t_interval_lpg;
    p.spg_days.clear();
    for (const auto& [k, v] : th.t_interval_spg) p.spg_days[k] = v;
    return p;
}

inline std::string padded(const char* prefix, std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%06zu", prefix, n);
    return buf;
}

/// Up to `max_len` flight groups that all contain passengers 1 and 2, with mixed sizes,
/// same-day runs, long gaps, few airports and shared PNRs.
inline dataset random_pair_sequence(std::mt19937_64& rng, std::size_t max_len) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    static const char* airports[] = {"AAA", "BBB", "CCC", "DDD", "EEE"};
    const auto len = static_cast<std::size_t>(pick(1, static_cast<int>(max_len)));
    std::vector<sfpg_record> records;
    int day = 0;
    std::size_t pnr = 0;
    std::vector<passenger_id> crowd = range_ids(3, 40);
    std::vector<passenger_id> base;
    for (std::size_t i = 0; i < len; ++i) {
        const int gap_kind = pick(0, 9);
        day += gap_kind < 2 ? 0 : gap_kind < 7 ? pick(1, 6) : gap_kind < 9 ? pick(7, 20) : pick(21, 40);
        if (pick(0, 2) == 0) ++pnr;
        const auto from = airports[pick(0, 4)];
        const auto to = pick(0, 19) == 0 ? from : airports[pick(0, 4)];

        std::vector<passenger_id> people = ids({1, 2});
        if (base.empty() || pick(0, 3) == 0) {
            const int size_kind = pick(0, 3);
            const int extra = size_kind == 0 ? 0 : size_kind == 1 ? pick(1, 7) : pick(8, 30);
            std::shuffle(crowd.begin(), crowd.end(), rng);
            base.assign(crowd.begin(), crowd.begin() + extra);
        } else if (!base.empty() && pick(0, 2) == 0) {
            // Small drift keeps overlap near the threshold.
            std::shuffle(base.begin(), base.end(), rng);
            base.pop_back();
            if (pick(0, 1) == 0) base.push_back(crowd[static_cast<std::size_t>(pick(0, 39))]);
        }
        people.insert(people.end(), base.begin(), base.end());
        std::sort(people.begin(), people.end());
        people.erase(std::unique(people.begin(), people.end()), people.end());
        records.push_back(rec(padded("S", i), padded("P", pnr), day, from, to, people, padded("F", i)));
    }
    return dataset::from_records(std::move(records));
}

inline bool same_journey(const cojourney_event& ev, const oracle::journey& j) {
    const auto why = j.why == oracle::ending::back_home  ? closure::return_to_origin
                     : j.why == oracle::ending::too_long ? closure::timeout
                                                          : closure::window_end;
    return (ev.type == journey_type::lpg) == j.large && ev.sfpg_ids == j.ids &&
           ev.start_date == kEpoch + j.first_day && ev.end_date == kEpoch + j.last_day && ev.closed_by == why;
}

} // namespace testing_support

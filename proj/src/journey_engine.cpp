#include "cotravel/journey_engine.hpp"

#include "cotravel/error.hpp"

#include <ostream>

#include <json.hpp>

namespace cotravel {

const char* to_string(journey_type t) { return t == journey_type::lpg ? "LPG" : "SPG"; }

const char* to_string(pair_phase p) {
    switch (p) {
    case pair_phase::outside: return "outside";
    case pair_phase::inside_spg: return "inside_spg";
    case pair_phase::inside_lpg: return "inside_lpg";
    }
    return "?";
}

const char* to_string(closure c) {
    switch (c) {
    case closure::return_to_origin: return "return";
    case closure::timeout: return "timeout";
    case closure::window_end: return "window_end";
    }
    return "?";
}

std::map<std::size_t, std::int32_t> default_spg_intervals() {
    // 22 days at size 2 and 16 at size 9, linearly interpolated and rounded.
    return {{2, 22}, {3, 21}, {4, 20}, {5, 19}, {6, 19}, {7, 18}, {8, 17}, {9, 16}};
}

void thresholds::validate() const {
    if (t_size < 2) throw error(error_kind::config, "t_size must be at least 2");
    if (!(t_overlap > 0.0 && t_overlap <= 1.0)) throw error(error_kind::config, "t_overlap must lie in (0, 1]");
    if (t_interval_lpg < 1) throw error(error_kind::config, "t_interval_lpg must be at least 1 day");
    for (const auto& [size, days] : t_interval_spg) {
        if (size < 2 || size >= t_size) {
            throw error(error_kind::config, "t_interval_spg has entry for size " + std::to_string(size) +
                                                " outside 2..t_size-1");
        }
        if (days < 1) throw error(error_kind::config, "t_interval_spg values must be at least 1 day");
    }
    for (std::size_t size = 2; size < t_size; ++size) {
        if (!t_interval_spg.contains(size)) {
            throw error(error_kind::config, "t_interval_spg is missing group size " + std::to_string(size));
        }
    }
}

std::int32_t thresholds::interval_for(std::size_t group_size) const {
    if (group_size >= t_size) return t_interval_lpg;
    auto it = t_interval_spg.find(group_size);
    if (it == t_interval_spg.end()) {
        throw error(error_kind::config, "no SPG interval for group size " + std::to_string(group_size));
    }
    return it->second;
}

double overlap(std::span<const passenger_id> a, std::span<const passenger_id> b) {
    std::size_t common = 0;
    auto i = a.begin();
    auto k = b.begin();
    while (i != a.end() && k != b.end()) {
        if (*i < *k) {
            ++i;
        } else if (*k < *i) {
            ++k;
        } else {
            ++common;
            ++i;
            ++k;
        }
    }
    const std::size_t unite = a.size() + b.size() - common;
    return unite == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(unite);
}

bool cond_is_lpg(const sfpg_record& sfpg, const thresholds& th) { return sfpg.size() >= th.t_size; }

bool cond_overlap(const sfpg_record& cur, std::span<const passenger_id> prev_passengers, const thresholds& th) {
    return overlap(cur.passengers, prev_passengers) >= th.t_overlap;
}

bool cond_timeout(const sfpg_record& cur, const open_journey& j, const thresholds& th) {
    return (cur.flight_date - j.start_date()) >= th.interval_for(cur.size());
}

bool cond_goback(const sfpg_record& cur, const open_journey& j) { return cur.destination == j.origin(); }

cojourney_event make_event(const passenger_pair& pair, const open_journey& j, closure why) {
    cojourney_event ev;
    ev.pair = pair;
    ev.type = j.type;
    ev.start_date = j.start_date();
    ev.end_date = j.last->flight_date;
    ev.closed_by = why;
    ev.sfpg_ids.reserve(j.members.size());
    for (const auto* r : j.members) ev.sfpg_ids.push_back(r->sfpg_id);
    return ev;
}

std::vector<cojourney_event> step_pair(pair_state& s, const sfpg_record& cur, const thresholds& th,
                                       const passenger_pair& pair) {
    std::vector<cojourney_event> out;
    step_pair(s, cur, th, true, [&](const open_journey& j, closure why) { out.push_back(make_event(pair, j, why)); });
    return out;
}

void write_events_jsonl(std::ostream& out, std::span<const cojourney_event> events) {
    for (const auto& ev : events) {
        nlohmann::ordered_json obj;
        obj["pair_u"] = raw(ev.pair.u);
        obj["pair_v"] = raw(ev.pair.v);
        obj["type"] = to_string(ev.type);
        obj["closed_by"] = to_string(ev.closed_by);
        obj["start_date"] = ev.start_date.to_iso();
        obj["end_date"] = ev.end_date.to_iso();
        obj["sfpg_ids"] = ev.sfpg_ids;
        out << obj.dump() << '\n';
    }
}

} // namespace cotravel

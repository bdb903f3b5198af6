#include "cotravel/calibration.hpp"

#include "cotravel/journey_engine.hpp"

#include <cmath>

namespace cotravel {

namespace {

std::vector<const sfpg_record*> large_segments(const dataset& d, const pnr& p, std::size_t cutoff) {
    std::vector<const sfpg_record*> out;
    for (auto idx : p.records) {
        const auto& r = d.records()[idx];
        if (r.size() >= cutoff) out.push_back(&r);
    }
    return out;
}

bool is_round(const std::vector<const sfpg_record*>& legs) {
    return legs.size() >= 2 && legs.front()->origin == legs.back()->destination;
}

} // namespace

overlap_calibration calibrate_overlap(const dataset& d, std::size_t large_cutoff) {
    overlap_calibration out;
    for (const auto& p : d.pnrs()) {
        const auto legs = large_segments(d, p, large_cutoff);
        if (!is_round(legs)) continue;
        ++out.qualifying_pnrs;
        for (std::size_t i = 1; i < legs.size(); ++i) {
            const double o = overlap(legs[i]->passengers, legs[i - 1]->passengers);
            out.overlaps.push_back(o);
            ++out.percent_histogram[static_cast<std::size_t>(std::floor(o * 100.0 + 1e-9))];
        }
    }
    if (!out.overlaps.empty()) {
        std::size_t above9 = 0, above7 = 0;
        for (double o : out.overlaps) {
            if (o > 0.9) ++above9;
            if (o > 0.7) ++above7;
        }
        const auto n = static_cast<double>(out.overlaps.size());
        out.fraction_above_09 = static_cast<double>(above9) / n;
        out.fraction_above_07 = static_cast<double>(above7) / n;
    }
    return out;
}

duration_calibration calibrate_duration(const dataset& d, std::size_t large_cutoff, std::int32_t max_days) {
    duration_calibration out;
    std::map<std::size_t, std::vector<double>> samples;
    std::vector<std::int32_t> large_durations;

    for (const auto& p : d.pnrs()) {
        if (p.records.size() >= 2) {
            const auto& first = d.records()[p.records.front()];
            const auto& last = d.records()[p.records.back()];
            if (first.origin == last.destination) {
                samples[distinct_passengers(d, p)].push_back(last.flight_date - first.flight_date);
            }
        }
        const auto legs = large_segments(d, p, large_cutoff);
        if (legs.empty()) continue;
        ++out.large_pnrs;
        if (is_round(legs)) large_durations.push_back(legs.back()->flight_date - legs.front()->flight_date);
    }

    for (const auto& [size, xs] : samples) {
        duration_stats s;
        s.count = xs.size();
        for (double x : xs) s.mean += x;
        s.mean /= static_cast<double>(s.count);
        for (double x : xs) s.variance += (x - s.mean) * (x - s.mean);
        s.variance /= static_cast<double>(s.count);
        out.by_group_size[size] = s;
    }

    out.large_round_pnrs = large_durations.size();
    out.round_fraction =
        out.large_pnrs ? static_cast<double>(out.large_round_pnrs) / static_cast<double>(out.large_pnrs) : 0.0;
    for (std::int32_t t = 0; t <= max_days; ++t) {
        std::size_t longer = 0;
        for (auto dur : large_durations) {
            if (dur > t) ++longer;
        }
        const double p1 = large_durations.empty()
                              ? 0.0
                              : static_cast<double>(longer) / static_cast<double>(large_durations.size());
        out.p1.push_back(p1);
        out.p2.push_back((1.0 - out.round_fraction) * p1);
    }
    return out;
}

} // namespace cotravel

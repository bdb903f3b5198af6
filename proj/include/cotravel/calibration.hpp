#pragma once

// Threshold calibration analytics over round-trip PNRs.

#include "cotravel/record_model.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace cotravel {

struct overlap_calibration {
    std::size_t qualifying_pnrs = 0;
    std::vector<double> overlaps;  // one per consecutive pair of large SFPGs, PNR order
    histogram percent_histogram;   // floor(overlap * 100) -> count; 1.0 lands in bin 100
    double fraction_above_09 = 0.0;
    double fraction_above_07 = 0.0;
};

/// Qualifying PNRs hold at least two SFPGs of `large_cutoff` or more passengers whose
/// first origin equals their last destination.
overlap_calibration calibrate_overlap(const dataset& d, std::size_t large_cutoff = 10);

struct duration_stats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // population variance
};

struct duration_calibration {
    std::map<std::size_t, duration_stats> by_group_size;  // round PNRs keyed by distinct passengers
    std::size_t large_pnrs = 0;
    std::size_t large_round_pnrs = 0;
    double round_fraction = 0.0;  // large_round_pnrs / large_pnrs
    std::vector<double> p1;       // p1[T]: share of large round PNRs lasting more than T days
    std::vector<double> p2;       // (1 - round_fraction) * p1[T]
};

duration_calibration calibrate_duration(const dataset& d, std::size_t large_cutoff = 10, std::int32_t max_days = 30);

} // namespace cotravel

#pragma once

// Synthetic booking data with known social ground truth.

#include "cotravel/date.hpp"
#include "cotravel/record_model.hpp"
#include "cotravel/tie_counter.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <vector>

#include <absl/container/flat_hash_map.h>
#include <json.hpp>

namespace cotravel {

struct gen_config {
    std::uint64_t seed = 1;
    std::size_t population = 20000;
    date window_start = date::from_ymd(2012, 1, 1);
    std::int32_t window_days = 365;
    std::size_t airports = 50;
    std::size_t large_group_size = 10;  // tours are at least this large

    // Acquainted cliques (families, friends, colleagues).
    double clique_member_fraction = 0.5;
    std::map<std::size_t, double> clique_size_weights = {{2, 0.45}, {3, 0.22}, {4, 0.15}, {5, 0.08},
                                                         {6, 0.04}, {7, 0.03}, {8, 0.02}, {9, 0.01}};
    double mean_extra_journeys = 1.2;      // geometric number of repeat journeys per clique
    double frequent_clique_fraction = 0.08;
    std::size_t frequent_min_journeys = 5;
    std::size_t frequent_max_journeys = 20;
    double subset_journey_probability = 0.3;
    double split_journey_probability = 0.15;  // journey booked across two PNRs
    double pack_journey_probability = 0.1;    // consecutive journeys in one PNR

    // Round-trip probability rises with group size.
    double round_probability_solo = 0.45;
    double round_probability_pair = 0.55;
    double round_probability_small_max = 0.62;
    double round_probability_large = 0.66;

    // Trip length in days.
    double small_duration_mean_pair = 3.5;
    double small_duration_mean_max = 5.2;
    double small_duration_sd_pair = 3.0;
    double small_duration_sd_max = 1.8;
    double large_duration_mean = 5.4;
    double large_duration_sd = 1.2;
    double long_tour_probability = 0.03;
    std::int32_t long_tour_max_days = 25;
    std::int32_t one_way_rest_days = 23;  // gap after a one-way trip before its travellers move again

    // Organised tour groups.
    std::size_t tour_groups = 600;
    std::size_t tour_max_size = 40;
    double tour_size_exponent = 2.2;
    double five_multiple_boost = 3.0;
    double tour_subgroup_share = 0.3;  // seats filled by acquainted subgroups

    double single_passenger_pnr_fraction = 0.7446;

    // Agency-built stranger groups, as a ratio of tour groups.
    double noise_rate = 0.0;
    std::size_t noise_max_size = 25;

    /// Throws error_kind::config.
    void validate() const;
};

nlohmann::json to_json(const gen_config& cfg);

/// Inverse of to_json; throws error_kind::parse on a missing or mistyped field.
gen_config gen_config_from_json(const nlohmann::json& j);

struct pair_truth {
    tie_label expected = tie_label::passive;
    std::uint32_t journeys = 0;  // generated co-journeys shared by the pair
    bool acquainted = false;
};

struct travel_group {
    std::uint32_t id = 0;
    std::vector<passenger_id> members;
    std::vector<std::vector<passenger_id>> subgroups;  // acquainted members, by clique
};

struct ground_truth {
    std::vector<std::vector<passenger_id>> cliques;
    std::vector<travel_group> tours;
    std::vector<travel_group> agency_groups;
    absl::flat_hash_map<passenger_id, std::uint32_t> clique_of;
    absl::flat_hash_map<passenger_pair, pair_truth> pairs;  // every co-travelling pair

    bool acquainted(const passenger_pair& p) const;
    std::vector<passenger_pair> acquaintance_edges() const;
    const pair_truth* find(const passenger_pair& p) const;
};

struct synthetic_data {
    dataset data;
    ground_truth truth;
};

synthetic_data generate(const gen_config& cfg);

/// Adds agency groups of mutual strangers, each a single one-way LPG flight, and marks
/// their pairs passive. A zero noise rate returns the input unchanged.
dataset inject_noise(const dataset& d, ground_truth& truth, const gen_config& cfg);

/// CSV `u,v,expected_label`, sorted by pair.
void write_truth_csv(std::ostream& out, const ground_truth& truth);
nlohmann::json truth_manifest(const ground_truth& truth);

/// Reads expected labels back; acquaintance and journey details are not part of the CSV.
ground_truth read_truth_csv(std::istream& in);
ground_truth read_truth_file(const std::filesystem::path& path);

} // namespace cotravel

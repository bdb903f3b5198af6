#pragma once

// Scores inferred ties against generator ground truth and compares the tie-strength measures.

#include "cotravel/journey_engine.hpp"
#include "cotravel/netstats.hpp"
#include "cotravel/network_builder.hpp"
#include "cotravel/record_model.hpp"
#include "cotravel/synthgen.hpp"
#include "cotravel/tie_counter.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

namespace cotravel {

struct class_scores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Rows are the expected label, columns the inferred one.
struct confusion_matrix {
    std::size_t active_active = 0;
    std::size_t active_passive = 0;
    std::size_t passive_active = 0;
    std::size_t passive_passive = 0;

    std::size_t total() const { return active_active + active_passive + passive_active + passive_passive; }
};

struct label_report {
    confusion_matrix counts;
    class_scores active;
    class_scores passive;
    std::size_t truth_pairs_without_tie = 0;
};

/// Throws error_kind::missing when a tie has no ground-truth entry.
label_report score_labels(std::span<const tie_record> ties, const ground_truth& gt);

struct tau_point {
    std::int64_t tau = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double fractional_nodes = 0.0;
    double fractional_edges = 0.0;
    std::size_t active_edges = 0;
    std::size_t passive_edges = 0;
    double passive_removal = 0.0;    // share of expected-passive ties filtered out
    double active_retention = 0.0;   // share of expected-active ties kept
    double active_precision = 0.0;   // share of kept edges expected active; 1 for an empty network
    node_features features;          // zero for an empty network
    double mean_degree_universe = 0.0;
    std::size_t component_count = 0;
    double largest_component_fraction = 0.0;
    std::size_t five_multiple_bumps = 0;
};

struct measure_curve {
    measure kind = measure::co_sfpg;
    std::vector<tau_point> points;  // ascending tau
    double degree_smoothness = 0.0;
    double ego_smoothness = 0.0;
};

struct compare_options {
    std::int64_t tau_max = 15;
    std::int64_t smoothness_lo = 1;  // common tau grid shared by every measure
    std::int64_t smoothness_hi = 15;
    std::size_t threads = 1;
};

struct eval_report {
    label_report labels;
    std::vector<measure_curve> curves;  // co_sfpg, co_pnr, co_jny
    std::size_t universe = 0;           // passengers with at least one tie
};

/// Sweeps every measure from its minimum tau up to tau_max over the inferred ties.
eval_report compare_measures(std::span<const tie_record> ties, const ground_truth& gt, const compare_options& opts = {});

/// Runs inference first.
eval_report compare_measures(const dataset& d, const ground_truth& gt, const thresholds& th,
                             const compare_options& opts = {});

/// Total variation of consecutive first differences.
double smoothness_score(std::span<const double> curve);

/// Degrees m - 1 for m in {10, 15, ..., 35} standing strictly above both neighbours.
std::size_t five_multiple_bumps(const histogram& degree_hist);

const measure_curve& curve_for(const eval_report& r, measure m);

nlohmann::ordered_json to_json(const eval_report& r);

/// One row per (measure, tau).
void write_curves_csv(std::ostream& out, const eval_report& r);

} // namespace cotravel

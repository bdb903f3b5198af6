#include "cotravel/evaluator.hpp"

#include "cotravel/error.hpp"
#include "cotravel/inference.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace cotravel {

namespace {

double ratio(std::size_t num, std::size_t den, double empty) {
    return den == 0 ? empty : static_cast<double>(num) / static_cast<double>(den);
}

class_scores scores(std::size_t tp, std::size_t fp, std::size_t fn) {
    class_scores s;
    // Nothing to find and nothing claimed counts as perfect.
    s.recall = ratio(tp, tp + fn, 1.0);
    s.precision = ratio(tp, tp + fp, tp + fn == 0 ? 1.0 : 0.0);
    s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

tie_label expected_label(const ground_truth& gt, const passenger_pair& p) {
    const auto* t = gt.find(p);
    if (!t) {
        throw error(error_kind::missing, "pair " + std::to_string(raw(p.u)) + "," + std::to_string(raw(p.v)) +
                                             " has no ground-truth label");
    }
    return t->expected;
}

} // namespace

label_report score_labels(std::span<const tie_record> ties, const ground_truth& gt) {
    label_report r;
    auto& c = r.counts;
    for (const auto& t : ties) {
        const bool want_active = expected_label(gt, t.pair) == tie_label::active;
        const bool got_active = t.label == tie_label::active;
        if (want_active) {
            ++(got_active ? c.active_active : c.active_passive);
        } else {
            ++(got_active ? c.passive_active : c.passive_passive);
        }
    }
    r.active = scores(c.active_active, c.passive_active, c.active_passive);
    r.passive = scores(c.passive_passive, c.active_passive, c.passive_active);
    r.truth_pairs_without_tie = gt.pairs.size() > ties.size() ? gt.pairs.size() - ties.size() : 0;
    return r;
}

double smoothness_score(std::span<const double> curve) {
    if (curve.size() < 3) return 0.0;
    double total = 0.0;
    for (std::size_t t = 0; t + 2 < curve.size(); ++t) {
        const double d0 = curve[t + 1] - curve[t];
        const double d1 = curve[t + 2] - curve[t + 1];
        total += std::abs(d1 - d0);
    }
    return total;
}

std::size_t five_multiple_bumps(const histogram& degree_hist) {
    auto at = [&](std::size_t k) {
        auto it = degree_hist.find(k);
        return it == degree_hist.end() ? std::size_t{0} : it->second;
    };
    std::size_t bumps = 0;
    for (std::size_t m = 10; m <= 35; m += 5) {
        const auto d = m - 1;
        if (at(d) > at(d - 1) && at(d) > at(d + 1)) ++bumps;
    }
    return bumps;
}

eval_report compare_measures(std::span<const tie_record> ties, const ground_truth& gt, const compare_options& opts) {
    eval_report report;
    if (!std::is_sorted(ties.begin(), ties.end(), [](const tie_record& a, const tie_record& b) { return a.pair < b.pair; })) {
        throw error(error_kind::consistency, "ties must be sorted by pair");
    }
    report.labels = score_labels(ties, gt);

    std::vector<tie_label> expected(ties.size());
    std::size_t active_total = 0;
    std::size_t passive_total = 0;
    for (std::size_t i = 0; i < ties.size(); ++i) {
        expected[i] = expected_label(gt, ties[i].pair);
        ++(expected[i] == tie_label::active ? active_total : passive_total);
    }
    auto expected_of = [&](const weighted_edge& e) {
        const auto it = std::lower_bound(ties.begin(), ties.end(), passenger_pair{e.u, e.v},
                                         [](const tie_record& t, const passenger_pair& p) { return t.pair < p; });
        return expected[static_cast<std::size_t>(it - ties.begin())];
    };

    {
        std::vector<passenger_id> everyone;
        everyone.reserve(ties.size() * 2);
        for (const auto& t : ties) {
            everyone.push_back(t.pair.u);
            everyone.push_back(t.pair.v);
        }
        std::sort(everyone.begin(), everyone.end());
        report.universe = static_cast<std::size_t>(std::unique(everyone.begin(), everyone.end()) - everyone.begin());
    }

    for (auto m : {measure::co_sfpg, measure::co_pnr, measure::co_jny}) {
        measure_curve curve;
        curve.kind = m;
        const tau_range range{min_tau(m), std::max(min_tau(m), opts.tau_max)};
        curve.points.resize(static_cast<std::size_t>(range.hi - range.lo + 1));
        const auto sizes = sweep(ties, m, range, [&](const threshold_network& net) {
            auto& p = curve.points[static_cast<std::size_t>(net.tau - range.lo)];
            p.tau = net.tau;
            for (const auto& e : net.edges) ++(expected_of(e) == tie_label::active ? p.active_edges : p.passive_edges);
            const graph g(net);
            p.nodes = g.node_count();
            p.edges = g.edge_count();
            if (g.node_count() > 0) {
                p.features = node_feature_means(g);
                const auto comps = components(g);
                p.component_count = comps.count;
                p.largest_component_fraction = comps.largest_fraction;
                p.five_multiple_bumps = five_multiple_bumps(degree_histogram(g));
            }
            p.mean_degree_universe = mean_degree_over_universe(g, report.universe);
        }, opts.threads);

        const auto& first = sizes.front();
        for (auto& p : curve.points) {
            p.fractional_nodes = ratio(p.nodes, first.nodes, 0.0);
            p.fractional_edges = ratio(p.edges, first.edges, 0.0);
            p.passive_removal = ratio(passive_total - p.passive_edges, passive_total, 1.0);
            p.active_retention = ratio(p.active_edges, active_total, 1.0);
            p.active_precision = ratio(p.active_edges, p.edges, 1.0);
        }

        std::vector<double> degree;
        std::vector<double> ego;
        for (const auto& p : curve.points) {
            if (p.tau < opts.smoothness_lo || p.tau > opts.smoothness_hi) continue;
            degree.push_back(p.features.degree);
            ego.push_back(p.features.ego_components);
        }
        curve.degree_smoothness = smoothness_score(degree);
        curve.ego_smoothness = smoothness_score(ego);
        report.curves.push_back(std::move(curve));
    }
    return report;
}

eval_report compare_measures(const dataset& d, const ground_truth& gt, const thresholds& th,
                             const compare_options& opts) {
    const auto result = infer(d, th);
    return compare_measures(result.ties, gt, opts);
}

const measure_curve& curve_for(const eval_report& r, measure m) {
    for (const auto& c : r.curves) {
        if (c.kind == m) return c;
    }
    throw error(error_kind::missing, std::string("no curve for measure ") + to_string(m));
}

nlohmann::ordered_json to_json(const eval_report& r) {
    auto cls = [](const class_scores& s) {
        return nlohmann::ordered_json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
    };
    nlohmann::ordered_json j;
    const auto& c = r.labels.counts;
    j["labels"] = {
        {"confusion",
         {{"active_as_active", c.active_active},
          {"active_as_passive", c.active_passive},
          {"passive_as_active", c.passive_active},
          {"passive_as_passive", c.passive_passive}}},
        {"active", cls(r.labels.active)},
        {"passive", cls(r.labels.passive)},
        {"truth_pairs_without_tie", r.labels.truth_pairs_without_tie},
    };
    j["universe"] = r.universe;
    j["measures"] = nlohmann::ordered_json::array();
    for (const auto& curve : r.curves) {
        nlohmann::ordered_json m;
        m["measure"] = to_string(curve.kind);
        m["degree_smoothness"] = curve.degree_smoothness;
        m["ego_smoothness"] = curve.ego_smoothness;
        std::size_t bumps = 0;
        for (const auto& p : curve.points) bumps += p.five_multiple_bumps;
        m["five_multiple_bumps"] = bumps;
        if (!curve.points.empty()) {
            const auto& p = curve.points.front().tau == 0 && curve.points.size() > 1 ? curve.points[1] : curve.points.front();
            m["passive_edges_at_tau1"] = p.passive_edges;
            m["active_retention_at_tau1"] = p.active_retention;
        }
        j["measures"].push_back(std::move(m));
    }
    return j;
}

void write_curves_csv(std::ostream& out, const eval_report& r) {
    out << "measure,tau,nodes,edges,fractional_nodes,fractional_edges,active_edges,passive_edges,"
           "passive_removal,active_retention,active_precision,mean_degree,mean_two_hop,mean_clustering,"
           "mean_normalized_clustering,mean_ego_components,mean_degree_universe,component_count,"
           "largest_component_fraction,five_multiple_bumps\n";
    for (const auto& curve : r.curves) {
        for (const auto& p : curve.points) {
            out << to_string(curve.kind) << ',' << p.tau << ',' << p.nodes << ',' << p.edges << ',' << p.fractional_nodes
                << ',' << p.fractional_edges << ',' << p.active_edges << ',' << p.passive_edges << ','
                << p.passive_removal << ',' << p.active_retention << ',' << p.active_precision << ','
                << p.features.degree << ',' << p.features.two_hop << ',' << p.features.clustering << ','
                << p.features.normalized_clustering << ',' << p.features.ego_components << ','
                << p.mean_degree_universe << ',' << p.component_count << ',' << p.largest_component_fraction << ','
                << p.five_multiple_bumps << '\n';
        }
    }
}

} // namespace cotravel

#include "cotravel/evaluator.hpp"
#include "cotravel/inference.hpp"
#include "cotravel/netstats.hpp"
#include "cotravel/network_builder.hpp"
#include "cotravel/synthgen.hpp"
#include "cotravel/tie_counter.hpp"
#include "oracles/graph_oracle.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace cotravel;
using namespace testing_support;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct verdict {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

const passenger_pair kPair = passenger_pair::of(passenger_id{1}, passenger_id{2});

std::vector<cojourney_event> events_of(const std::vector<cojourney_event>& all, const passenger_pair& p) {
    std::vector<cojourney_event> out;
    for (const auto& e : all) {
        if (e.pair == p) out.push_back(e);
    }
    return out;
}

std::vector<dataset> test_datasets() {
    std::vector<dataset> out;
    std::mt19937_64 rng(303);
    for (int i = 0; i < 50; ++i) out.push_back(random_pair_sequence(rng, 50));
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        gen_config cfg;
        cfg.seed = seed;
        cfg.population = 400 + 40 * seed;
        cfg.tour_groups = 5 + seed;
        cfg.window_days = 90;
        cfg.noise_rate = seed % 2 ? 0.5 : 0.0;
        out.push_back(generate(cfg).data);
    }
    return out;
}

gen_config default_noisy() {
    gen_config cfg;
    cfg.noise_rate = 0.5;
    return cfg;
}

std::string ties_csv(std::span<const tie_record> ties) {
    std::ostringstream out;
    write_ties_csv(out, ties);
    return out.str();
}

std::string events_text(const std::vector<cojourney_event>& events) {
    std::ostringstream out;
    for (const auto& e : events) {
        out << raw(e.pair.u) << ' ' << raw(e.pair.v) << ' ' << to_string(e.type) << ' ' << to_string(e.closed_by) << ' '
            << e.start_date.to_iso() << ' ' << e.end_date.to_iso();
        for (const auto& id : e.sfpg_ids) out << ' ' << id;
        out << '\n';
    }
    return out.str();
}

// 1
verdict journey_oracle_equivalence() {
    verdict v;
    const auto t0 = clock_type::now();
    std::mt19937_64 rng(1001);
    const auto p = to_oracle(thresholds{});
    std::size_t compared = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const auto d = random_pair_sequence(rng, 50);
        const auto events = discover_cojourneys(d, thresholds{});
        const auto ref = oracle::segment(to_oracle(d), p);
        const auto got = events_of(events, kPair);
        ++compared;
        if (got.size() != ref.size()) {
            v.fail("trial " + std::to_string(trial) + ": journey count differs");
            continue;
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (!same_journey(got[i], ref[i])) v.fail("trial " + std::to_string(trial) + ": journey differs");
        }
    }
    const double took = seconds_since(t0);
    if (took >= 60.0) v.fail("took " + std::to_string(took) + " s");
    if (v.pass) v.detail = std::to_string(compared) + " sequences, 0 mismatches, " + std::to_string(took) + " s";
    return v;
}

// 2
verdict counting_oracle_equivalence() {
    verdict v;
    std::size_t sequences = 0;
    for (std::size_t len = 1; len <= 6; ++len) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << len); ++mask) {
            std::vector<bool> flags;
            pair_state s;
            for (std::size_t k = 0; k < len; ++k) {
                const bool large = (mask >> k) & 1;
                flags.push_back(large);
                count_cojourney(s, large ? journey_type::lpg : journey_type::spg);
                const int want = oracle::count_journeys(flags);
                const int got = s.jny.is_null() ? -1 : static_cast<int>(s.jny.count());
                if (want != got) v.fail("sequence mask " + std::to_string(mask) + " length " + std::to_string(len));
            }
            ++sequences;
        }
    }
    pair_state jump;
    count_cojourney(jump, journey_type::lpg);
    if (jump.jny.count() != 0 || jump.jny.is_null()) v.fail("lone LPG is not 0");
    count_cojourney(jump, journey_type::spg);
    if (jump.jny.count() != 2) v.fail("LPG then SPG is not 2");
    if (sequences != 126) v.fail("enumerated " + std::to_string(sequences) + " sequences");
    if (v.pass) v.detail = std::to_string(sequences) + " sequences, retroactive jump to 2 confirmed";
    return v;
}

// 3
verdict prefix_counting_invariant(const std::vector<dataset>& sets) {
    verdict v;
    std::size_t checks = 0;
    for (std::size_t n = 0; n < sets.size(); ++n) {
        const auto& d = sets[n];
        pair_tracker tracker(thresholds{});
        const auto records = d.records();
        for (std::size_t i = 0; i < records.size(); ++i) {
            tracker.advance(records.subspan(i, 1));
            const auto& people = records[i].passengers;
            for (std::size_t a = 0; a < people.size(); ++a) {
                for (std::size_t b = a + 1; b < people.size(); ++b) {
                    const auto* s = tracker.find(passenger_pair::of(people[a], people[b]));
                    ++checks;
                    if (!s || s->co_pnr > s->co_sfpg || s->co_pnr == 0) {
                        v.fail("dataset " + std::to_string(n) + " record " + std::to_string(i));
                    }
                }
            }
        }
        tracker.for_each_state([&](const passenger_pair&, const pair_state& s) {
            ++checks;
            if (s.co_pnr > s.co_sfpg) v.fail("dataset " + std::to_string(n) + " final state");
        });
    }
    if (v.pass) v.detail = std::to_string(sets.size()) + " datasets, " + std::to_string(checks) + " pair checks";
    return v;
}

// 4
verdict edge_set_equality(const std::vector<dataset>& sets, const std::vector<tie_record>& big) {
    verdict v;
    auto check = [&](std::span<const tie_record> ties, const std::string& name) {
        const auto s = build_network(ties, measure::co_sfpg, 1).edges.size();
        const auto p = build_network(ties, measure::co_pnr, 1).edges.size();
        const auto j = build_network(ties, measure::co_jny, 0).edges.size();
        if (s != p || s != j) v.fail(name + ": " + std::to_string(s) + "/" + std::to_string(p) + "/" + std::to_string(j));
        return s;
    };
    for (std::size_t n = 0; n < sets.size(); ++n) check(infer(sets[n], thresholds{}).ties, "dataset " + std::to_string(n));
    const auto edges = check(big, "default synthetic");
    if (v.pass) v.detail = std::to_string(sets.size() + 1) + " datasets, default run " + std::to_string(edges) + " edges";
    return v;
}

// 5
verdict passive_filtering(const eval_report& r) {
    verdict v;
    const auto& j1 = curve_for(r, measure::co_jny).points.at(1);
    if (j1.tau != 1) v.fail("unexpected co-journey grid");
    if (j1.passive_edges != 0) v.fail("co-journey tau 1 keeps " + std::to_string(j1.passive_edges) + " passive edges");
    if (r.labels.counts.passive_active + r.labels.counts.passive_passive == 0) v.fail("no passive ties generated");
    for (const auto& p : curve_for(r, measure::co_sfpg).points) {
        if (p.tau < 1 || p.tau > 15) continue;
        if (p.passive_edges == 0 && p.active_retention >= j1.active_retention) {
            v.fail("co-sfpg tau " + std::to_string(p.tau) + " matches the co-journey filter");
        }
    }
    if (v.pass) {
        const auto& s1 = curve_for(r, measure::co_sfpg).points.front();
        std::ostringstream d;
        d << "cojny tau1: 0 passive, retention " << j1.active_retention << "; cosfpg tau1: " << s1.passive_edges
          << " passive";
        for (const auto& p : curve_for(r, measure::co_sfpg).points) {
            if (p.passive_edges == 0) {
                d << "; first passive-free cosfpg tau " << p.tau << " keeps " << p.active_retention;
                break;
            }
        }
        v.detail = d.str();
    }
    return v;
}

// 6
verdict graph_metric_oracles() {
    verdict v;
    std::mt19937_64 rng(606);
    std::size_t nodes_checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
        const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double p = density * density * 0.2;
        oracle::dense_graph dense(n);
        std::vector<tie_record> ties;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (std::bernoulli_distribution(p)(rng)) {
                    dense.link(a, b);
                    ties.push_back({passenger_pair{passenger_id{a + 1}, passenger_id{b + 1}}, 1, 1, 1, tie_label::active});
                }
            }
        }
        const graph g(build_network(ties, measure::co_sfpg, 1));
        std::size_t live = 0;
        for (std::size_t x = 0; x < n; ++x) live += dense.degree(x) > 0;
        const auto where = "graph " + std::to_string(trial);
        if (g.node_count() != live) v.fail(where + ": node count");
        for (std::size_t x = 0; x < n; ++x) {
            if (dense.degree(x) == 0) continue;
            const auto idx = g.index_of(passenger_id{x + 1});
            if (!idx) {
                v.fail(where + ": node missing");
                continue;
            }
            const auto c = clustering(g, *idx);
            ++nodes_checked;
            if (c.local != oracle::local_clustering(dense, x)) v.fail(where + ": local clustering");
            if (c.normalized != oracle::normalized_clustering(dense, x, live)) v.fail(where + ": normalized clustering");
            if (two_hop(g, *idx) != oracle::within_two(dense, x)) v.fail(where + ": two-hop");
            if (ego_components(g, *idx) != oracle::ego_parts(dense, x)) v.fail(where + ": ego components");
        }
        if (components(g).size_histogram != oracle::component_sizes(dense)) v.fail(where + ": components");
    }
    if (v.pass) v.detail = "1000 graphs, " + std::to_string(nodes_checked) + " nodes";
    return v;
}

// 7
verdict monotonicity(const std::vector<dataset>& sets, const dataset& big, const std::vector<tie_record>& big_ties) {
    verdict v;
    std::size_t sweeps = 0;
    auto check_sizes = [&](const std::vector<network_size>& sizes, const std::string& name) {
        ++sweeps;
        for (std::size_t i = 1; i < sizes.size(); ++i) {
            if (sizes[i].nodes > sizes[i - 1].nodes || sizes[i].edges > sizes[i - 1].edges) {
                v.fail(name + " grows at tau " + std::to_string(sizes[i].tau));
            }
        }
    };
    auto check_ties = [&](std::span<const tie_record> ties, const std::string& name) {
        std::size_t universe = 0;
        {
            std::vector<passenger_id> all;
            for (const auto& t : ties) {
                all.push_back(t.pair.u);
                all.push_back(t.pair.v);
            }
            std::sort(all.begin(), all.end());
            universe = static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
        }
        for (auto m : {measure::co_sfpg, measure::co_pnr, measure::co_jny}) {
            const tau_range range{min_tau(m), 20};
            std::vector<double> degree(static_cast<std::size_t>(range.hi - range.lo + 1));
            check_sizes(sweep(ties, m, range, [&](const threshold_network& net) {
                degree[static_cast<std::size_t>(net.tau - range.lo)] =
                    universe ? mean_degree_over_universe(graph(net), universe) : 0.0;
            }), name + " " + to_string(m));
            for (std::size_t i = 1; i < degree.size(); ++i) {
                if (degree[i] > degree[i - 1]) v.fail(name + " " + to_string(m) + " universe degree grows");
            }
        }
    };
    auto check_flights = [&](const dataset& d, const std::string& name) {
        check_sizes(sweep_edges(co_flight_counts(d), measure::co_flight, {0, 20}), name + " coflight");
    };
    for (std::size_t n = 0; n < sets.size(); ++n) {
        check_ties(infer(sets[n], thresholds{}).ties, "dataset " + std::to_string(n));
        check_flights(sets[n], "dataset " + std::to_string(n));
    }
    check_ties(big_ties, "default synthetic");
    check_flights(big, "default synthetic");
    if (v.pass) v.detail = std::to_string(sweeps) + " sweeps";
    return v;
}

// 8
verdict smoothness(const eval_report& r) {
    verdict v;
    const auto& s = curve_for(r, measure::co_sfpg);
    const auto& j = curve_for(r, measure::co_jny);
    if (!(j.degree_smoothness < s.degree_smoothness)) v.fail("mean degree");
    if (!(j.ego_smoothness < s.ego_smoothness)) v.fail("mean ego components");
    std::ostringstream d;
    d << "degree cojny " << j.degree_smoothness << " vs cosfpg " << s.degree_smoothness << "; ego cojny "
      << j.ego_smoothness << " vs cosfpg " << s.ego_smoothness;
    v.detail = v.pass ? d.str() : v.detail + " (" + d.str() + ")";
    return v;
}

// 9
verdict determinism() {
    verdict v;
    gen_config cfg;
    cfg.seed = 99;
    cfg.population = 8000;
    cfg.tour_groups = 250;
    cfg.noise_rate = 0.5;
    const auto a = generate(cfg);
    const auto b = generate(cfg);
    std::ostringstream da, db, ta, tb;
    write_sfpg_csv(da, a.data);
    write_sfpg_csv(db, b.data);
    write_truth_csv(ta, a.truth);
    write_truth_csv(tb, b.truth);
    if (da.str() != db.str()) v.fail("generated records differ");
    if (ta.str() != tb.str()) v.fail("generated truth differs");

    const auto first = infer(a.data, thresholds{}, {1, true, 500});
    const auto second = infer(a.data, thresholds{}, {1, true, 500});
    const auto sharded = infer(a.data, thresholds{}, {4, true, 500});
    const auto ties = ties_csv(first.ties);
    const auto events = events_text(first.events);
    if (ties != ties_csv(second.ties) || events != events_text(second.events)) v.fail("rerun differs");
    if (ties != ties_csv(sharded.ties) || events != events_text(sharded.events)) v.fail("sharded run differs");

    std::istringstream in(da.str());
    const auto reparsed = parse_sfpg_stream(in, input_format::csv);
    if (ties != ties_csv(infer(reparsed, thresholds{}).ties)) v.fail("reparsed run differs");

    const auto records = a.data.records();
    for (std::size_t chunks : {2, 7, 50}) {
        pair_tracker tracker(thresholds{}, {true, 500, 1, 0});
        const auto step = (records.size() + chunks - 1) / chunks;
        for (std::size_t at = 0; at < records.size(); at += step) {
            tracker.advance(records.subspan(at, std::min(step, records.size() - at)));
        }
        tracker.flush();
        auto chunk_events = tracker.take_events();
        std::stable_sort(chunk_events.begin(), chunk_events.end(),
                         [](const cojourney_event& x, const cojourney_event& y) { return x.pair < y.pair; });
        if (ties_csv(tracker.ties()) != ties) v.fail(std::to_string(chunks) + " chunks: ties differ");
        if (events_text(chunk_events) != events) v.fail(std::to_string(chunks) + " chunks: events differ");
    }
    if (v.pass) {
        v.detail = std::to_string(records.size()) + " records; reruns, 4 shards and 2/7/50 chunks identical";
    }
    return v;
}

// 10
verdict performance() {
    verdict v;
    const auto dir = std::filesystem::temp_directory_path() / "cotravel_acceptance_perf";
    std::filesystem::create_directories(dir);
    auto timed = [&](std::size_t population, std::size_t tours, std::size_t& rows) {
        gen_config cfg;
        cfg.population = population;
        cfg.tour_groups = tours;
        cfg.window_days = 730;
        cfg.mean_extra_journeys = 9;
        const auto path = dir / ("sfpg_" + std::to_string(population) + ".csv");
        {
            const auto s = generate(cfg);
            std::ofstream out(path);
            write_sfpg_csv(out, s.data);
        }
        double took = 0.0;
        for (int attempt = 0; attempt < 2; ++attempt) {
            const auto t0 = clock_type::now();
            const auto d = parse_sfpg_file(path, input_format::csv);
            const auto shards = std::max(1u, std::thread::hardware_concurrency());
            const auto r = infer(d, thresholds{}, {shards, false, 500});
            const double t = seconds_since(t0);
            took = attempt == 0 ? t : std::min(took, t);
            if (r.ties.empty()) v.fail("no ties inferred");
            rows = d.records().size();
        }
        std::filesystem::remove(path);
        return took;
    };
    std::size_t rows1 = 0, rows2 = 0;
    const double t1 = timed(102000, 8160, rows1);
    const double t2 = timed(204000, 16320, rows2);
    std::filesystem::remove_all(dir);
    if (rows1 < 1000000) v.fail("only " + std::to_string(rows1) + " rows generated");
    if (rows2 < 2 * rows1 * 95 / 100) v.fail("doubled input has only " + std::to_string(rows2) + " rows");
    if (t1 >= 300.0) v.fail("1M rows took " + std::to_string(t1) + " s");
    const double ratio = t2 / t1;
    if (ratio > 2.5) v.fail("time ratio " + std::to_string(ratio));
    std::ostringstream d;
    d << rows1 << " rows " << t1 << " s; " << rows2 << " rows " << t2 << " s; best of 2 runs; ratio " << ratio << "; "
      << std::thread::hardware_concurrency() << " hardware threads";
    v.detail = v.pass ? d.str() : v.detail + " (" + d.str() + ")";
    return v;
}

} // namespace

int main() {
    std::vector<std::pair<std::string, std::function<verdict()>>> criteria;

    const auto sets = test_datasets();
    const auto big = generate(default_noisy());
    const auto big_ties = infer(big.data, thresholds{}).ties;
    const auto report = compare_measures(big_ties, big.truth);

    criteria.emplace_back("1 journey state machine matches direct oracle", journey_oracle_equivalence);
    criteria.emplace_back("2 co-journey counter matches direct oracle", counting_oracle_equivalence);
    criteria.emplace_back("3 co_pnr <= co_sfpg after every prefix", [&] { return prefix_counting_invariant(sets); });
    criteria.emplace_back("4 equal base edge sets across measures", [&] { return edge_set_equality(sets, big_ties); });
    criteria.emplace_back("5 co-journey filter removes every passive tie", [&] { return passive_filtering(report); });
    criteria.emplace_back("6 graph metrics match brute-force oracles", graph_metric_oracles);
    criteria.emplace_back("7 threshold sweeps are monotone", [&] { return monotonicity(sets, big.data, big_ties); });
    criteria.emplace_back("8 co-journey curves are smoother", [&] { return smoothness(report); });
    criteria.emplace_back("9 deterministic and chunk-invariant", determinism);
    criteria.emplace_back("10 desk-scale performance", performance);

    int failed = 0;
    for (const auto& [name, run] : criteria) {
        verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << " :: " << v.detail << std::endl;
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}

#include "cli.hpp"

#include "cotravel/calibration.hpp"
#include "cotravel/error.hpp"
#include "cotravel/evaluator.hpp"
#include "cotravel/inference.hpp"
#include "cotravel/netstats.hpp"
#include "cotravel/network_builder.hpp"
#include "cotravel/record_model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

namespace cotravel::cli {

namespace fs = std::filesystem;

namespace {

nlohmann::ordered_json histogram_json(const histogram& h) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : h) j[std::to_string(k)] = v;
    return j;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(error_kind::missing, "cannot write " + path.string());
    return out;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

input_format format_of(const run_config& c) {
    auto f = parse_input_format(c.format);
    if (!f) throw error(error_kind::config, "unknown format '" + c.format + "'");
    return *f;
}

measure measure_of(const run_config& c) {
    auto m = parse_measure(c.measure);
    if (!m) throw error(error_kind::config, "unknown measure '" + c.measure + "'");
    return *m;
}

tau_range tau_of(const run_config& c, measure m, bool range_default) {
    if (c.tau.empty()) return {min_tau(m), range_default ? std::max(min_tau(m), c.tau_max) : min_tau(m)};
    auto r = parse_tau_range(c.tau);
    if (!r || r->lo > r->hi) throw error(error_kind::config, "invalid tau range '" + c.tau + "'");
    if (r->lo < min_tau(m)) {
        throw error(error_kind::config, "tau " + std::to_string(r->lo) + " is below the minimum for " + c.measure);
    }
    return *r;
}

void require_input(const std::string& path, const char* what) {
    if (path.empty()) throw error(error_kind::missing, std::string("--") + what + " is required");
    if (!fs::exists(path)) throw error(error_kind::missing, std::string(what) + " file not found: " + path);
}

dataset load_dataset(const run_config& c) {
    require_input(c.input, "input");
    return parse_sfpg_file(c.input, format_of(c));
}

std::vector<tie_record> load_ties(const run_config& c) {
    require_input(c.input, "input");
    return read_ties_file(c.input);
}

/// Networks for every tau in range; co-flight works from the raw dataset.
template <class F>
std::vector<network_size> for_each_network(const run_config& c, measure m, tau_range range, F&& f) {
    if (m == measure::co_flight) {
        const auto d = load_dataset(c);
        const auto edges = co_flight_counts(d, c.max_group_size);
        return sweep_edges(edges, m, range, f, c.threads);
    }
    const auto ties = load_ties(c);
    return sweep(ties, m, range, f, c.threads);
}

std::string network_file(measure m, std::int64_t tau) {
    return std::string("network_") + to_string(m) + "_tau" + std::to_string(tau) + ".csv";
}

std::vector<std::string> cmd_synth(const run_config& c) {
    const auto data = generate(c.gen);
    const auto fmt = format_of(c);
    const std::string records = fmt == input_format::csv ? "sfpg.csv" : "sfpg.jsonl";
    {
        auto out = open_output(fs::path(c.output_dir) / records);
        if (fmt == input_format::csv) {
            write_sfpg_csv(out, data.data);
        } else {
            write_sfpg_jsonl(out, data.data);
        }
    }
    {
        auto out = open_output(fs::path(c.output_dir) / "truth.csv");
        write_truth_csv(out, data.truth);
    }
    write_json(fs::path(c.output_dir) / "truth_manifest.json", truth_manifest(data.truth));
    return {records, "truth.csv", "truth_manifest.json"};
}

std::vector<std::string> cmd_profile(const run_config& c) {
    const auto d = load_dataset(c);
    const auto p = profile_dataset(d, c.th.t_size);
    nlohmann::ordered_json j;
    j["pnr_count"] = p.pnr_count;
    j["sfpg_count"] = p.sfpg_count;
    j["single_passenger_fraction"] = p.single_passenger_fraction;
    j["collapsed_duplicates"] = d.collapsed_duplicates();
    j["pnr_size"] = histogram_json(p.pnr_size);
    j["sfpg_size"] = histogram_json(p.sfpg_size);
    j["segments_small_pnr"] = histogram_json(p.segments_small_pnr);
    j["segments_large_pnr"] = histogram_json(p.segments_large_pnr);
    write_json(fs::path(c.output_dir) / "profile.json", j);
    return {"profile.json"};
}

std::vector<std::string> cmd_infer(const run_config& c) {
    c.th.validate();
    if (c.shards == 0) throw error(error_kind::config, "--shards must be at least 1");
    const auto d = load_dataset(c);
    const auto result = infer(d, c.th, {c.shards, c.events, c.max_group_size});
    {
        auto out = open_output(fs::path(c.output_dir) / "ties.csv");
        write_ties_csv(out, result.ties);
    }
    if (!c.events) return {"ties.csv"};
    auto out = open_output(fs::path(c.output_dir) / "cojourneys.jsonl");
    write_events_jsonl(out, result.events);
    return {"cojourneys.jsonl", "ties.csv"};
}

std::vector<std::string> cmd_build(const run_config& c) {
    const auto m = measure_of(c);
    const auto range = tau_of(c, m, false);
    std::vector<std::string> files;
    for (auto t = range.lo; t <= range.hi; ++t) files.push_back(network_file(m, t));
    for_each_network(c, m, range, [&](const threshold_network& g) {
        auto out = open_output(fs::path(c.output_dir) / network_file(m, g.tau));
        write_edges_csv(out, g);
    });
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<std::string> cmd_stats(const run_config& c) {
    const auto m = measure_of(c);
    const auto range = tau_of(c, m, false);
    std::vector<nlohmann::ordered_json> rows(static_cast<std::size_t>(range.hi - range.lo + 1));
    std::vector<network_summary> summaries(rows.size());
    std::vector<node_features> features(rows.size());
    const auto sizes = for_each_network(c, m, range, [&](const threshold_network& net) {
        const auto i = static_cast<std::size_t>(net.tau - range.lo);
        const graph g(net);
        summaries[i] = summarize(g, {});
        if (g.node_count() > 0) features[i] = node_feature_means(g);
    });
    const auto universe = sizes.empty() ? 0 : sizes.front().nodes;
    nlohmann::ordered_json j;
    j["measure"] = to_string(m);
    j["universe"] = universe;
    j["networks"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& s = summaries[i];
        const auto& f = features[i];
        nlohmann::ordered_json r;
        r["tau"] = sizes[i].tau;
        r["nodes"] = s.node_count;
        r["edges"] = s.edge_count;
        r["fractional_nodes"] = universe ? static_cast<double>(s.node_count) / static_cast<double>(universe) : 0.0;
        r["fractional_edges"] = sizes.front().edges ? static_cast<double>(s.edge_count) / static_cast<double>(sizes.front().edges) : 0.0;
        r["components"] = s.component_count;
        r["largest_component_fraction"] = s.largest_component_fraction;
        r["mean_degree"] = f.degree;
        r["mean_degree_universe"] = universe ? 2.0 * static_cast<double>(s.edge_count) / static_cast<double>(universe) : 0.0;
        r["mean_two_hop"] = f.two_hop;
        r["mean_clustering"] = f.clustering;
        r["mean_normalized_clustering"] = f.normalized_clustering;
        r["mean_ego_components"] = f.ego_components;
        r["degree_histogram"] = histogram_json(s.degree_histogram);
        r["component_size_histogram"] = histogram_json(s.component_size_histogram);
        j["networks"].push_back(std::move(r));
    }
    const auto name = std::string("stats_") + to_string(m) + ".json";
    write_json(fs::path(c.output_dir) / name, j);
    std::vector<std::string> files{name};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto tau = std::to_string(sizes[i].tau);
        const auto degree = std::string("degree_") + to_string(m) + "_tau" + tau + ".csv";
        const auto comps = std::string("components_") + to_string(m) + "_tau" + tau + ".csv";
        auto write_hist = [&](const std::string& file, const histogram& h) {
            auto out = open_output(fs::path(c.output_dir) / file);
            out << "value,count\n";
            for (const auto& [k, n] : h) out << k << ',' << n << '\n';
        };
        write_hist(degree, summaries[i].degree_histogram);
        write_hist(comps, summaries[i].component_size_histogram);
        files.push_back(comps);
        files.push_back(degree);
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<std::string> cmd_sweep(const run_config& c) {
    const auto m = measure_of(c);
    const auto range = tau_of(c, m, true);
    std::vector<network_summary> summaries(static_cast<std::size_t>(range.hi - range.lo + 1));
    const auto sizes = for_each_network(c, m, range, [&](const threshold_network& net) {
        summaries[static_cast<std::size_t>(net.tau - range.lo)] = summarize(graph(net), {});
    });
    const auto sweep_name = std::string("sweep_") + to_string(m) + ".csv";
    const auto degree_name = std::string("degree_") + to_string(m) + ".csv";
    auto out = open_output(fs::path(c.output_dir) / sweep_name);
    auto deg = open_output(fs::path(c.output_dir) / degree_name);
    out << "measure,tau,nodes,edges,fractional_nodes,fractional_edges,components,largest_component_fraction\n";
    deg << "measure,tau,degree,count\n";
    const auto& ref = sizes.front();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const auto& s = summaries[i];
        out << to_string(m) << ',' << sizes[i].tau << ',' << s.node_count << ',' << s.edge_count << ','
            << (ref.nodes ? static_cast<double>(s.node_count) / static_cast<double>(ref.nodes) : 0.0) << ','
            << (ref.edges ? static_cast<double>(s.edge_count) / static_cast<double>(ref.edges) : 0.0) << ','
            << s.component_count << ',' << s.largest_component_fraction << '\n';
        for (const auto& [k, n] : s.degree_histogram) deg << to_string(m) << ',' << sizes[i].tau << ',' << k << ',' << n << '\n';
    }
    nlohmann::ordered_json summary = nlohmann::ordered_json::array();
    for (const auto& sz : sizes) summary.push_back({{"tau", sz.tau}, {"nodes", sz.nodes}, {"edges", sz.edges}});
    const auto json_name = std::string("sweep_") + to_string(m) + ".json";
    write_json(fs::path(c.output_dir) / json_name, summary);
    return {degree_name, sweep_name, json_name};
}

std::vector<std::string> cmd_calibrate(const run_config& c) {
    const auto d = load_dataset(c);
    const auto o = calibrate_overlap(d, c.th.t_size);
    const auto du = calibrate_duration(d, c.th.t_size);
    nlohmann::ordered_json j;
    j["overlap"] = {
        {"qualifying_pnrs", o.qualifying_pnrs},
        {"samples", o.overlaps.size()},
        {"fraction_above_0.9", o.fraction_above_09},
        {"fraction_above_0.7", o.fraction_above_07},
        {"percent_histogram", histogram_json(o.percent_histogram)},
    };
    nlohmann::ordered_json by_size = nlohmann::ordered_json::object();
    for (const auto& [size, s] : du.by_group_size) {
        by_size[std::to_string(size)] = {{"count", s.count}, {"mean", s.mean}, {"variance", s.variance}};
    }
    j["duration"] = {
        {"large_pnrs", du.large_pnrs},
        {"large_round_pnrs", du.large_round_pnrs},
        {"round_fraction", du.round_fraction},
        {"by_group_size", by_size},
        {"p1", du.p1},
        {"p2", du.p2},
    };
    write_json(fs::path(c.output_dir) / "calibration.json", j);
    return {"calibration.json"};
}

std::vector<std::string> cmd_evaluate(const run_config& c) {
    const auto ties = load_ties(c);
    require_input(c.truth, "truth");
    const auto gt = read_truth_file(c.truth);
    compare_options opts;
    opts.tau_max = c.tau_max;
    opts.smoothness_hi = c.tau_max;
    opts.threads = c.threads;
    const auto report = compare_measures(ties, gt, opts);
    write_json(fs::path(c.output_dir) / "eval.json", to_json(report));
    auto out = open_output(fs::path(c.output_dir) / "curves.csv");
    write_curves_csv(out, report);
    return {"curves.csv", "eval.json"};
}

struct cli_failure {
    std::string kind;
    std::string message;
    int code;
};

} // namespace

std::map<std::size_t, std::int32_t> parse_interval_table(const std::string& text) {
    std::map<std::size_t, std::int32_t> table;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        std::size_t size = 0;
        std::int32_t days = 0;
        const auto* b = item.data();
        const auto* e = item.data() + item.size();
        if (eq == std::string::npos || std::from_chars(b, b + eq, size).ptr != b + eq ||
            std::from_chars(b + eq + 1, e, days).ptr != e || eq == 0 || eq + 1 == item.size()) {
            throw error(error_kind::config, "invalid --t-interval-spg entry '" + item + "'");
        }
        table[size] = days;
    }
    return table;
}

std::string format_interval_table(const std::map<std::size_t, std::int32_t>& table) {
    std::string out;
    for (const auto& [size, days] : table) {
        if (!out.empty()) out += ',';
        out += std::to_string(size) + '=' + std::to_string(days);
    }
    return out;
}

nlohmann::ordered_json to_json(const run_config& c) {
    nlohmann::ordered_json j;
    j["command"] = c.command;
    j["input"] = c.input;
    j["truth"] = c.truth;
    j["output_dir"] = c.output_dir;
    j["format"] = c.format;
    j["t_size"] = c.th.t_size;
    j["t_overlap"] = c.th.t_overlap;
    j["t_interval_lpg"] = c.th.t_interval_lpg;
    j["t_interval_spg"] = format_interval_table(c.th.t_interval_spg);
    j["measure"] = c.measure;
    j["tau"] = c.tau;
    j["tau_max"] = c.tau_max;
    j["shards"] = c.shards;
    j["threads"] = c.threads;
    j["max_group_size"] = c.max_group_size;
    j["events"] = c.events;
    j["generator"] = to_json(c.gen);
    return j;
}

run_config run_config_from_json(const nlohmann::json& j) {
    try {
        run_config c;
        c.command = j.at("command").get<std::string>();
        c.input = j.at("input").get<std::string>();
        c.truth = j.at("truth").get<std::string>();
        c.output_dir = j.at("output_dir").get<std::string>();
        c.format = j.at("format").get<std::string>();
        c.th.t_size = j.at("t_size").get<std::size_t>();
        c.th.t_overlap = j.at("t_overlap").get<double>();
        c.th.t_interval_lpg = j.at("t_interval_lpg").get<std::int32_t>();
        c.th.t_interval_spg = parse_interval_table(j.at("t_interval_spg").get<std::string>());
        c.measure = j.at("measure").get<std::string>();
        c.tau = j.at("tau").get<std::string>();
        c.tau_max = j.at("tau_max").get<std::int64_t>();
        c.shards = j.at("shards").get<std::size_t>();
        c.threads = j.at("threads").get<std::size_t>();
        c.max_group_size = j.at("max_group_size").get<std::size_t>();
        c.events = j.at("events").get<bool>();

        c.gen = gen_config_from_json(j.at("generator"));
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw error(error_kind::parse, std::string("run manifest: ") + e.what());
    }
}

void execute(const run_config& c, std::ostream& out) {
    c.th.validate();
    fs::create_directories(c.output_dir);
    std::vector<std::string> outputs;
    if (c.command == "synth") {
        outputs = cmd_synth(c);
    } else if (c.command == "profile") {
        outputs = cmd_profile(c);
    } else if (c.command == "infer") {
        outputs = cmd_infer(c);
    } else if (c.command == "build") {
        outputs = cmd_build(c);
    } else if (c.command == "stats") {
        outputs = cmd_stats(c);
    } else if (c.command == "sweep") {
        outputs = cmd_sweep(c);
    } else if (c.command == "calibrate") {
        outputs = cmd_calibrate(c);
    } else if (c.command == "evaluate") {
        outputs = cmd_evaluate(c);
    } else {
        throw error(error_kind::config, "unknown command '" + c.command + "'");
    }
    auto manifest = to_json(c);
    manifest["outputs"] = outputs;
    write_json(fs::path(c.output_dir) / "run_manifest.json", manifest);
    for (const auto& o : outputs) out << (fs::path(c.output_dir) / o).string() << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    run_config c;
    std::string spg_table;
    std::string manifest_path;
    std::string rerun_output;

    CLI::App app{"Co-travel network inference from flight booking records"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output-dir", c.output_dir, "Directory for output files");
        sub->add_option("--format", c.format, "Record format")->check(CLI::IsMember({"csv", "jsonl"}));
    };
    auto add_input = [&](CLI::App* sub, const char* help) { sub->add_option("--input", c.input, help); };
    auto add_thresholds = [&](CLI::App* sub) {
        sub->add_option("--t-size", c.th.t_size, "Smallest large-group size");
        sub->add_option("--t-overlap", c.th.t_overlap, "Passenger overlap that continues a large-group journey");
        sub->add_option("--t-interval-lpg", c.th.t_interval_lpg, "Large-group journey timeout in days");
        sub->add_option("--t-interval-spg", spg_table, "Small-group timeouts, e.g. 2=22,3=21");
    };
    auto add_network = [&](CLI::App* sub) {
        sub->add_option("--measure", c.measure, "Tie strength measure")
            ->check(CLI::IsMember({"cosfpg", "copnr", "cojny", "coflight"}));
        sub->add_option("--tau", c.tau, "Threshold or range A..B");
        sub->add_option("--threads", c.threads, "Worker threads across thresholds");
        sub->add_option("--max-group-size", c.max_group_size, "Largest flight manifest for co-flight counting");
    };

    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with ground truth");
    add_common(synth);
    synth->add_option("--seed", c.gen.seed, "RNG seed");
    synth->add_option("--population", c.gen.population, "Number of passengers");
    synth->add_option("--window-days", c.gen.window_days, "Observation window length");
    synth->add_option("--tour-groups", c.gen.tour_groups, "Number of organised tour groups");
    synth->add_option("--noise-rate", c.gen.noise_rate, "Agency stranger groups per tour group");
    synth->add_option("--airports", c.gen.airports, "Number of airports");
    synth->add_option("--mean-extra-journeys", c.gen.mean_extra_journeys, "Mean repeat journeys per clique");
    std::string window_start;
    synth->add_option("--window-start", window_start, "First day, YYYY-MM-DD");

    auto* profile = app.add_subcommand("profile", "Group size and segment histograms");
    add_common(profile);
    add_input(profile, "SFPG records");
    profile->add_option("--t-size", c.th.t_size, "Large-group cutoff");

    auto* infer_cmd = app.add_subcommand("infer", "Discover co-journeys and label ties");
    add_common(infer_cmd);
    add_input(infer_cmd, "SFPG records");
    add_thresholds(infer_cmd);
    infer_cmd->add_option("--shards", c.shards, "Pair-hash shards processed in parallel");
    infer_cmd->add_option("--max-group-size", c.max_group_size, "Largest SFPG accepted for pair enumeration");
    infer_cmd->add_flag("--events", c.events, "Also write the co-journey events");

    auto* build = app.add_subcommand("build", "Write threshold networks");
    add_common(build);
    add_input(build, "Tie CSV, or SFPG records for coflight");
    add_network(build);

    auto* stats = app.add_subcommand("stats", "Network and node statistics");
    add_common(stats);
    add_input(stats, "Tie CSV, or SFPG records for coflight");
    add_network(stats);

    auto* sweep_cmd = app.add_subcommand("sweep", "Network sizes across a threshold range");
    add_common(sweep_cmd);
    add_input(sweep_cmd, "Tie CSV, or SFPG records for coflight");
    add_network(sweep_cmd);

    auto* calibrate = app.add_subcommand("calibrate", "Overlap and duration calibration");
    add_common(calibrate);
    add_input(calibrate, "SFPG records");
    calibrate->add_option("--t-size", c.th.t_size, "Large-group cutoff");

    auto* evaluate = app.add_subcommand("evaluate", "Score ties against ground truth");
    add_common(evaluate);
    add_input(evaluate, "Tie CSV");
    evaluate->add_option("--truth", c.truth, "Ground-truth CSV");
    evaluate->add_option("--tau-max", c.tau_max, "Largest threshold swept");
    evaluate->add_option("--threads", c.threads, "Worker threads across thresholds");

    auto* rerun = app.add_subcommand("rerun", "Repeat a run from its run_manifest.json");
    rerun->add_option("--manifest", manifest_path, "Manifest to replay")->required();
    rerun->add_option("--output-dir", rerun_output, "Write outputs here instead");

    auto fail = [&](const std::string& kind, const std::string& message, int code) {
        nlohmann::ordered_json j{{"error", kind}, {"message", message}};
        err << j.dump() << '\n';
        return code;
    };

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    }

    try {
        if (rerun->parsed()) {
            std::ifstream in(manifest_path);
            if (!in) throw error(error_kind::missing, "cannot open manifest " + manifest_path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw error(error_kind::parse, std::string("run manifest: ") + e.what());
            }
            auto replay = run_config_from_json(j);
            if (!rerun_output.empty()) replay.output_dir = rerun_output;
            execute(replay, out);
            return 0;
        }
        c.command = app.get_subcommands().front()->get_name();
        if (!spg_table.empty()) c.th.t_interval_spg = parse_interval_table(spg_table);
        if (!window_start.empty()) {
            auto d = date::parse_iso(window_start);
            if (!d) throw error(error_kind::config, "invalid --window-start '" + window_start + "'");
            c.gen.window_start = *d;
        }
        execute(c, out);
        return 0;
    } catch (const error& e) {
        return fail(to_string(e.kind()), e.what(), 1);
    } catch (const fs::filesystem_error& e) {
        return fail("missing", e.what(), 1);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
}

} // namespace cotravel::cli

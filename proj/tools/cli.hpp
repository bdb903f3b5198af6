#pragma once

#include "cotravel/journey_engine.hpp"
#include "cotravel/synthgen.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace cotravel::cli {

/// Every effective setting of one run; written to run_manifest.json and read back by `rerun`.
struct run_config {
    std::string command;
    std::string input;
    std::string truth;
    std::string output_dir = ".";
    std::string format = "csv";
    thresholds th;
    std::string measure = "cojny";
    std::string tau;  // empty means the measure's default range
    std::size_t shards = 1;
    std::size_t threads = 1;
    std::size_t max_group_size = 500;
    bool events = false;
    std::int64_t tau_max = 15;
    gen_config gen;
};

nlohmann::ordered_json to_json(const run_config& c);
run_config run_config_from_json(const nlohmann::json& j);

/// Parses `2=22,3=21,...`.
std::map<std::size_t, std::int32_t> parse_interval_table(const std::string& text);
std::string format_interval_table(const std::map<std::size_t, std::int32_t>& table);

/// Executes a run whose settings are already resolved.
void execute(const run_config& c, std::ostream& out);

/// Full command line without the program name. Errors are reported on `err` as a JSON object
/// and turned into a nonzero return value.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cotravel::cli

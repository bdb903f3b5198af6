#include "cotravel/record_model.hpp"

#include "cotravel/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string_view>
#include <tuple>

#include <absl/container/flat_hash_set.h>
#include <json.hpp>

namespace cotravel {

namespace {

constexpr std::array<std::string_view, 7> kColumns = {
    "sfpg_id", "pnr_id", "flight_id", "flight_date", "origin", "destination", "passengers"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool blank(std::string_view s) { return trim(s).empty(); }

void split(std::string_view line, char sep, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

passenger_id parse_passenger(std::string_view s, std::size_t line) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw parse_error(line, "invalid passenger id '" + std::string(s) + "'");
    }
    return passenger_id{value};
}

date parse_date(std::string_view s, std::size_t line) {
    auto d = date::parse_iso(s);
    if (!d) throw parse_error(line, "unparseable flight_date '" + std::string(s) + "'");
    return *d;
}

void require_nonempty(std::string_view value, std::string_view column, std::size_t line) {
    if (value.empty()) throw parse_error(line, "empty " + std::string(column));
}

std::vector<sfpg_record> read_csv(std::istream& in) {
    std::vector<sfpg_record> records;
    std::string line;
    std::size_t line_no = 0;

    std::array<std::size_t, kColumns.size()> column_of{};
    std::size_t header_width = 0;
    bool have_header = false;
    std::vector<std::string_view> fields;
    std::vector<std::string_view> ids;

    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        if (!have_header) {
            split(line, ',', fields);
            header_width = fields.size();
            for (std::size_t c = 0; c < kColumns.size(); ++c) {
                auto it = std::find(fields.begin(), fields.end(), kColumns[c]);
                if (it == fields.end()) {
                    throw parse_error(line_no, "missing required column '" + std::string(kColumns[c]) + "'");
                }
                column_of[c] = static_cast<std::size_t>(it - fields.begin());
            }
            have_header = true;
            continue;
        }
        split(line, ',', fields);
        if (fields.size() != header_width) {
            throw parse_error(line_no, "expected " + std::to_string(header_width) + " fields, got " +
                                           std::to_string(fields.size()));
        }
        sfpg_record r;
        r.sfpg_id = fields[column_of[0]];
        r.pnr_id = fields[column_of[1]];
        r.flight_id = fields[column_of[2]];
        r.flight_date = parse_date(fields[column_of[3]], line_no);
        r.origin = fields[column_of[4]];
        r.destination = fields[column_of[5]];
        for (std::size_t c : {0u, 1u, 2u, 4u, 5u}) require_nonempty(fields[column_of[c]], kColumns[c], line_no);

        split(fields[column_of[6]], ';', ids);
        for (auto id : ids) {
            if (id.empty()) continue;
            r.passengers.push_back(parse_passenger(id, line_no));
        }
        if (r.passengers.empty()) throw parse_error(line_no, "SFPG has no passengers");
        records.push_back(std::move(r));
    }
    return records;
}

std::string json_id(const nlohmann::json& obj, std::string_view key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end()) throw parse_error(line, "missing required field '" + std::string(key) + "'");
    std::string value;
    if (it->is_string()) {
        value = it->get<std::string>();
    } else if (it->is_number_integer()) {
        value = std::to_string(it->get<std::int64_t>());
    } else {
        throw parse_error(line, "field '" + std::string(key) + "' must be a string or integer");
    }
    require_nonempty(value, key, line);
    return value;
}

std::vector<sfpg_record> read_jsonl(std::istream& in) {
    std::vector<sfpg_record> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw parse_error(line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!obj.is_object()) throw parse_error(line_no, "expected a JSON object");

        sfpg_record r;
        r.sfpg_id = json_id(obj, "sfpg_id", line_no);
        r.pnr_id = json_id(obj, "pnr_id", line_no);
        r.flight_id = json_id(obj, "flight_id", line_no);
        auto date_it = obj.find("flight_date");
        if (date_it == obj.end() || !date_it->is_string()) {
            throw parse_error(line_no, "missing or non-string field 'flight_date'");
        }
        r.flight_date = parse_date(date_it->get<std::string>(), line_no);
        r.origin = json_id(obj, "origin", line_no);
        r.destination = json_id(obj, "destination", line_no);

        auto pax = obj.find("passengers");
        if (pax == obj.end() || !pax->is_array()) throw parse_error(line_no, "missing array field 'passengers'");
        for (const auto& p : *pax) {
            if (!p.is_number_unsigned() && !(p.is_number_integer() && p.get<std::int64_t>() >= 0)) {
                throw parse_error(line_no, "passenger ids must be non-negative integers");
            }
            r.passengers.push_back(passenger_id{p.get<std::uint64_t>()});
        }
        if (r.passengers.empty()) throw parse_error(line_no, "SFPG has no passengers");
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace

std::optional<input_format> parse_input_format(std::string_view name) {
    if (name == "csv") return input_format::csv;
    if (name == "jsonl") return input_format::jsonl;
    return std::nullopt;
}

dataset dataset::from_records(std::vector<sfpg_record> records, std::optional<date> window_start,
                              std::optional<date> window_end) {
    dataset d;
    absl::flat_hash_set<std::string> seen_ids;
    seen_ids.reserve(records.size());
    for (auto& r : records) {
        std::sort(r.passengers.begin(), r.passengers.end());
        const auto last = std::unique(r.passengers.begin(), r.passengers.end());
        d.collapsed_duplicates_ += static_cast<std::size_t>(r.passengers.end() - last);
        r.passengers.erase(last, r.passengers.end());
        if (r.passengers.empty()) throw error(error_kind::parse, "SFPG " + r.sfpg_id + " has no passengers");
        if (!seen_ids.insert(r.sfpg_id).second) {
            throw error(error_kind::parse, "duplicate sfpg_id " + r.sfpg_id);
        }
    }

    const auto chronological = [](const sfpg_record& a, const sfpg_record& b) {
        return std::tie(a.flight_date, a.flight_id, a.sfpg_id) < std::tie(b.flight_date, b.flight_id, b.sfpg_id);
    };
    if (!std::is_sorted(records.begin(), records.end(), chronological)) {
        std::vector<std::uint32_t> order(records.size());
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return chronological(records[a], records[b]); });
        std::vector<sfpg_record> sorted;
        sorted.reserve(records.size());
        for (auto i : order) sorted.push_back(std::move(records[i]));
        records = std::move(sorted);
    }

    if (!records.empty()) {
        d.window_ = {records.front().flight_date, records.back().flight_date};
    }
    if (window_start) d.window_.start = *window_start;
    if (window_end) d.window_.end = *window_end;
    if (d.window_.end < d.window_.start) throw error(error_kind::config, "window end precedes window start");
    if (!records.empty() &&
        (records.front().flight_date < d.window_.start || d.window_.end < records.back().flight_date)) {
        throw error(error_kind::config, "records fall outside the requested window [" + d.window_.start.to_iso() +
                                            ", " + d.window_.end.to_iso() + "]");
    }

    for (std::uint32_t i = 0; i < records.size(); ++i) {
        auto& r = records[i];
        auto [it, inserted] = d.pnr_lookup_.try_emplace(r.pnr_id, static_cast<std::uint32_t>(d.pnrs_.size()));
        if (inserted) d.pnrs_.push_back(pnr{r.pnr_id, {}});
        r.pnr_key = it->second;
        d.pnrs_[it->second].records.push_back(i);
    }
    d.records_ = std::move(records);
    return d;
}

const pnr* dataset::find_pnr(const std::string& pnr_id) const {
    auto it = pnr_lookup_.find(pnr_id);
    return it == pnr_lookup_.end() ? nullptr : &pnrs_[it->second];
}

dataset parse_sfpg_stream(std::istream& in, input_format format, std::optional<date> window_start,
                          std::optional<date> window_end) {
    auto records = format == input_format::csv ? read_csv(in) : read_jsonl(in);
    return dataset::from_records(std::move(records), window_start, window_end);
}

dataset parse_sfpg_file(const std::filesystem::path& path, input_format format, std::optional<date> window_start,
                        std::optional<date> window_end) {
    std::ifstream in(path);
    if (!in) throw error(error_kind::missing, "cannot open input file " + path.string());
    return parse_sfpg_stream(in, format, window_start, window_end);
}

void write_sfpg_csv(std::ostream& out, const dataset& d) {
    out << "sfpg_id,pnr_id,flight_id,flight_date,origin,destination,passengers\n";
    for (const auto& r : d.records()) {
        out << r.sfpg_id << ',' << r.pnr_id << ',' << r.flight_id << ',' << r.flight_date.to_iso() << ','
            << r.origin << ',' << r.destination << ',';
        for (std::size_t i = 0; i < r.passengers.size(); ++i) {
            if (i) out << ';';
            out << raw(r.passengers[i]);
        }
        out << '\n';
    }
}

void write_sfpg_jsonl(std::ostream& out, const dataset& d) {
    for (const auto& r : d.records()) {
        nlohmann::json obj;
        obj["sfpg_id"] = r.sfpg_id;
        obj["pnr_id"] = r.pnr_id;
        obj["flight_id"] = r.flight_id;
        obj["flight_date"] = r.flight_date.to_iso();
        obj["origin"] = r.origin;
        obj["destination"] = r.destination;
        auto& pax = obj["passengers"] = nlohmann::json::array();
        for (auto p : r.passengers) pax.push_back(raw(p));
        out << obj.dump() << '\n';
    }
}

std::size_t distinct_passengers(const dataset& d, const pnr& p) {
    const auto records = d.records();
    if (p.records.size() == 1) return records[p.records.front()].size();
    std::vector<passenger_id> all;
    for (auto idx : p.records) {
        const auto& pax = records[idx].passengers;
        all.insert(all.end(), pax.begin(), pax.end());
    }
    std::sort(all.begin(), all.end());
    return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

dataset_profile profile_dataset(const dataset& d, std::size_t large_cutoff) {
    dataset_profile prof;
    prof.pnr_count = d.pnrs().size();
    prof.sfpg_count = d.records().size();
    for (const auto& r : d.records()) ++prof.sfpg_size[r.size()];

    std::size_t single = 0;
    for (const auto& p : d.pnrs()) {
        const auto n = distinct_passengers(d, p);
        ++prof.pnr_size[n];
        if (n == 1) ++single;
        auto& strata = n < large_cutoff ? prof.segments_small_pnr : prof.segments_large_pnr;
        ++strata[p.records.size()];
    }
    prof.single_passenger_fraction =
        prof.pnr_count == 0 ? 0.0 : static_cast<double>(single) / static_cast<double>(prof.pnr_count);
    return prof;
}

} // namespace cotravel

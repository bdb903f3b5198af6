#pragma once

#include "cotravel/date.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

namespace cotravel {

enum class passenger_id : std::uint64_t {};

constexpr std::uint64_t raw(passenger_id p) { return static_cast<std::uint64_t>(p); }

/// Unordered passenger pair, always stored with u < v.
struct passenger_pair {
    passenger_id u{};
    passenger_id v{};

    static constexpr passenger_pair of(passenger_id a, passenger_id b) {
        return a < b ? passenger_pair{a, b} : passenger_pair{b, a};
    }

    friend constexpr auto operator<=>(const passenger_pair&, const passenger_pair&) = default;

    template <class H>
    friend H AbslHashValue(H h, const passenger_pair& p) {
        return H::combine(std::move(h), raw(p.u), raw(p.v));
    }
};

/// Single flight passenger group: the passengers of one PNR booked on one flight.
struct sfpg_record {
    std::string sfpg_id;
    std::string pnr_id;
    std::string flight_id;
    date flight_date;
    std::string origin;
    std::string destination;
    std::vector<passenger_id> passengers;  // sorted ascending, no duplicates

    // Dense PNR index assigned by dataset; consistent only within one dataset.
    std::uint32_t pnr_key = 0;

    std::size_t size() const { return passengers.size(); }
};

struct pnr {
    std::string pnr_id;
    std::vector<std::uint32_t> records;  // indices into dataset::records(), chronological
};

enum class input_format { csv, jsonl };

std::optional<input_format> parse_input_format(std::string_view name);

struct date_window {
    date start;
    date end;
};

/// Immutable, validated, chronologically sorted set of SFPG records.
class dataset {
public:
    dataset() = default;

    /// Validates, deduplicates passengers, sorts by (flight_date, flight_id, sfpg_id) and
    /// indexes PNRs. Window defaults to the data's min/max dates.
    static dataset from_records(std::vector<sfpg_record> records,
                                std::optional<date> window_start = std::nullopt,
                                std::optional<date> window_end = std::nullopt);

    std::span<const sfpg_record> records() const { return records_; }
    std::span<const pnr> pnrs() const { return pnrs_; }
    const pnr* find_pnr(const std::string& pnr_id) const;

    const date_window& window() const { return window_; }
    bool empty() const { return records_.empty(); }

    /// Duplicate passenger ids removed while building records.
    std::size_t collapsed_duplicates() const { return collapsed_duplicates_; }

private:
    std::vector<sfpg_record> records_;
    std::vector<pnr> pnrs_;
    absl::flat_hash_map<std::string, std::uint32_t> pnr_lookup_;
    date_window window_{};
    std::size_t collapsed_duplicates_ = 0;
};

dataset parse_sfpg_stream(std::istream& in, input_format format,
                          std::optional<date> window_start = std::nullopt,
                          std::optional<date> window_end = std::nullopt);

dataset parse_sfpg_file(const std::filesystem::path& path, input_format format,
                        std::optional<date> window_start = std::nullopt,
                        std::optional<date> window_end = std::nullopt);

void write_sfpg_csv(std::ostream& out, const dataset& d);
void write_sfpg_jsonl(std::ostream& out, const dataset& d);

using histogram = std::map<std::size_t, std::size_t>;

struct dataset_profile {
    std::size_t pnr_count = 0;
    std::size_t sfpg_count = 0;
    histogram pnr_size;             // distinct passengers per PNR
    histogram sfpg_size;            // passengers per SFPG
    histogram segments_small_pnr;   // flight segments per PNR, PNR size below the cutoff
    histogram segments_large_pnr;   // flight segments per PNR, PNR size at or above the cutoff
    double single_passenger_fraction = 0.0;
};

dataset_profile profile_dataset(const dataset& d, std::size_t large_cutoff = 10);

/// Distinct passengers across all SFPGs of a PNR.
std::size_t distinct_passengers(const dataset& d, const pnr& p);

} // namespace cotravel

#pragma once

// Stage two: simple co-occurrence counts, co-journey counting and tie labels.

#include "cotravel/journey_engine.hpp"
#include "cotravel/pair_state.hpp"
#include "cotravel/record_model.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cotravel {

enum class tie_label : std::uint8_t { active, passive };

const char* to_string(tie_label l);
std::optional<tie_label> parse_tie_label(std::string_view s);

struct tie_record {
    passenger_pair pair;
    std::uint32_t co_sfpg = 0;
    std::uint32_t co_pnr = 0;
    std::uint32_t co_jny = 0;
    tie_label label = tie_label::passive;

    friend bool operator==(const tie_record&, const tie_record&) = default;
};

/// One more shared SFPG; the PNR count only moves the first time a PNR is seen.
void count_simple(pair_state& state, const sfpg_record& cur);

void count_cojourney(pair_state& state, journey_type type);
void count_cojourney(pair_state& state, const cojourney_event& ev);

/// Throws error_kind::consistency when no co-journey has been consumed.
tie_record label_tie(const passenger_pair& pair, const pair_state& state);

/// CSV `u,v,co_sfpg,co_pnr,co_jny,label`, rows sorted by (u, v).
void write_ties_csv(std::ostream& out, std::span<const tie_record> ties);
std::vector<tie_record> read_ties_csv(std::istream& in);
std::vector<tie_record> read_ties_file(const std::filesystem::path& path);

} // namespace cotravel

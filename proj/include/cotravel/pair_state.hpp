#pragma once

#include "cotravel/date.hpp"
#include "cotravel/record_model.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cotravel {

enum class journey_type : std::uint8_t { lpg, spg };

enum class pair_phase : std::uint8_t { outside, inside_spg, inside_lpg };

const char* to_string(journey_type t);
const char* to_string(pair_phase p);

/// Co-journey currently being assembled for one pair. Record pointers refer into
/// the dataset being processed, which must outlive the journey.
struct open_journey {
    const sfpg_record* first = nullptr;
    const sfpg_record* last = nullptr;
    std::uint32_t legs = 0;
    journey_type type = journey_type::spg;
    std::vector<const sfpg_record*> members;  // filled only when member tracking is on

    date start_date() const { return first->flight_date; }
    const std::string& origin() const { return first->origin; }
    const std::vector<passenger_id>& last_passengers() const { return last->passengers; }
};

enum class jny_phase : std::uint8_t { null, zero, one, two, more };

/// Co-journey counter state: Null until the first event, then an exact count.
class journey_count {
public:
    bool is_null() const { return value_ < 0; }
    std::uint32_t count() const { return is_null() ? 0u : static_cast<std::uint32_t>(value_); }

    jny_phase phase() const {
        if (value_ < 0) return jny_phase::null;
        if (value_ > 2) return jny_phase::more;
        return static_cast<jny_phase>(value_ + 1);
    }

    void consume(journey_type t) {
        if (value_ < 0) {
            value_ = t == journey_type::lpg ? 0 : 1;
        } else if (value_ == 0) {
            value_ = 2;  // the earlier LPG journey is re-read as a small-group journey
        } else {
            ++value_;
        }
    }

private:
    std::int32_t value_ = -1;
};

/// PNR ids already seen by a pair. Most pairs meet in a single PNR, so the first id is kept inline.
class pnr_set {
public:
    bool insert(std::uint32_t key) {
        if (first_ == kEmpty) {
            first_ = key;
            return true;
        }
        if (first_ == key || std::find(rest_.begin(), rest_.end(), key) != rest_.end()) return false;
        rest_.push_back(key);
        return true;
    }

    std::size_t size() const { return first_ == kEmpty ? 0 : 1 + rest_.size(); }

private:
    static constexpr std::uint32_t kEmpty = 0xffffffffu;
    std::uint32_t first_ = kEmpty;
    std::vector<std::uint32_t> rest_;
};

struct pair_state {
    pair_phase phase = pair_phase::outside;
    std::unique_ptr<open_journey> journey;  // present only while inside a co-journey
    std::uint32_t co_sfpg = 0;
    std::uint32_t co_pnr = 0;
    pnr_set seen_pnrs;
    journey_count jny;
};

} // namespace cotravel

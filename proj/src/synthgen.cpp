#include "cotravel/synthgen.hpp"

#include "cotravel/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <tuple>

namespace cotravel {

namespace {

using rng_t = std::mt19937_64;

std::string airport_code(std::size_t i) {
    std::string code(3, 'A');
    code[2] = static_cast<char>('A' + i % 26);
    code[1] = static_cast<char>('A' + (i / 26) % 26);
    code[0] = static_cast<char>('A' + (i / 676) % 26);
    return code;
}

std::string numbered(const char* prefix, std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%010zu", prefix, n);
    return buf;
}

double lerp(double a, double b, double t) { return a + (b - a) * t; }

struct leg {
    std::size_t from = 0;
    std::size_t to = 0;
    std::int32_t day = 0;
};

struct person_schedule {
    std::int32_t free_from = 0;
    std::int64_t avoid_first_stop = -1;  // origin of the last one-way trip
};

class generator {
public:
    explicit generator(const gen_config& cfg)
        : cfg_(cfg), rng_(cfg.seed), people_(cfg.population) {
        for (std::size_t i = 0; i < cfg.airports; ++i) airports_.push_back(airport_code(i));
    }

    synthetic_data run() {
        form_cliques();
        schedule_group_travel();
        book_solo_travel();
        finalize_labels();
        synthetic_data out;
        out.data = dataset::from_records(std::move(records_), cfg_.window_start,
                                         cfg_.window_start + (cfg_.window_days - 1));
        out.truth = std::move(truth_);
        return out;
    }

private:
    struct request {
        std::int32_t desired = 0;
        bool tour = false;
        std::size_t index = 0;  // clique or tour ordinal
    };

    struct clique_booking {
        std::vector<passenger_id> last_members;
        std::string last_pnr;
    };

    static passenger_id pid(std::size_t idx) { return passenger_id{idx + 1}; }
    static std::size_t idx(passenger_id p) { return static_cast<std::size_t>(raw(p) - 1); }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    bool chance(double p) { return uniform() < p; }
    template <class T>
    T uniform_int(T lo, T hi) {
        return std::uniform_int_distribution<T>(lo, hi)(rng_);
    }
    std::size_t pick_weighted(const std::vector<double>& weights) {
        return std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng_);
    }

    void form_cliques() {
        std::vector<std::size_t> order(cfg_.population);
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng_);

        std::vector<std::size_t> sizes;
        std::vector<double> weights;
        for (const auto& [size, w] : cfg_.clique_size_weights) {
            sizes.push_back(size);
            weights.push_back(w);
        }
        const auto members = static_cast<std::size_t>(std::llround(cfg_.clique_member_fraction *
                                                                   static_cast<double>(cfg_.population)));
        std::size_t pos = 0;
        while (pos < members) {
            const auto size = sizes[pick_weighted(weights)];
            if (pos + size > members) break;
            std::vector<passenger_id> clique;
            for (std::size_t k = 0; k < size; ++k) clique.push_back(pid(order[pos + k]));
            std::sort(clique.begin(), clique.end());
            const auto id = static_cast<std::uint32_t>(truth_.cliques.size());
            for (auto p : clique) truth_.clique_of[p] = id;
            truth_.cliques.push_back(std::move(clique));
            pos += size;
        }
        clique_home_.resize(truth_.cliques.size());
        for (auto& h : clique_home_) h = uniform_int<std::size_t>(0, cfg_.airports - 1);
        bookings_.resize(truth_.cliques.size());
    }

    std::size_t journey_count() {
        if (chance(cfg_.frequent_clique_fraction)) {
            return uniform_int<std::size_t>(cfg_.frequent_min_journeys, cfg_.frequent_max_journeys);
        }
        std::geometric_distribution<std::size_t> extra(1.0 / (1.0 + cfg_.mean_extra_journeys));
        return 1 + extra(rng_);
    }

    void schedule_group_travel() {
        std::vector<request> requests;
        for (std::size_t c = 0; c < truth_.cliques.size(); ++c) {
            const auto n = journey_count();
            for (std::size_t k = 0; k < n; ++k) {
                requests.push_back({uniform_int<std::int32_t>(0, cfg_.window_days - 1), false, c});
            }
        }
        for (std::size_t t = 0; t < cfg_.tour_groups; ++t) {
            requests.push_back({uniform_int<std::int32_t>(0, cfg_.window_days - 1), true, t});
        }
        std::sort(requests.begin(), requests.end(), [](const request& a, const request& b) {
            return std::tie(a.desired, a.tour, a.index) < std::tie(b.desired, b.tour, b.index);
        });
        for (const auto& r : requests) {
            if (r.tour) {
                book_tour(r);
            } else {
                book_clique_journey(r);
            }
        }
    }

    double round_probability(std::size_t group) const {
        if (group <= 1) return cfg_.round_probability_solo;
        if (group >= cfg_.large_group_size) return cfg_.round_probability_large;
        const double t = static_cast<double>(group - 2) / static_cast<double>(std::max<std::size_t>(1, cfg_.large_group_size - 3));
        return lerp(cfg_.round_probability_pair, cfg_.round_probability_small_max, std::min(1.0, t));
    }

    std::size_t leg_count(bool round, bool large) {
        if (!round) return chance(0.85) ? 1 : 2;
        static const std::vector<double> small{0.80, 0.08, 0.12};
        static const std::vector<double> big{0.55, 0.08, 0.25, 0.04, 0.08};
        return 2 + pick_weighted(large ? big : small);
    }

    std::int32_t trip_days(std::size_t group, std::size_t legs) {
        std::int32_t days = 0;
        if (group >= cfg_.large_group_size) {
            if (chance(cfg_.long_tour_probability)) {
                days = uniform_int<std::int32_t>(12, cfg_.long_tour_max_days);
            } else {
                const double d = std::normal_distribution<double>(cfg_.large_duration_mean, cfg_.large_duration_sd)(rng_);
                days = std::clamp<std::int32_t>(static_cast<std::int32_t>(std::lround(d)), 1, 11);
            }
        } else {
            const double t = static_cast<double>(group - 2) / static_cast<double>(std::max<std::size_t>(1, cfg_.large_group_size - 3));
            const double mean = lerp(cfg_.small_duration_mean_pair, cfg_.small_duration_mean_max, std::min(1.0, t));
            const double sd = lerp(cfg_.small_duration_sd_pair, cfg_.small_duration_sd_max, std::min(1.0, t));
            const double d = std::normal_distribution<double>(mean, sd)(rng_);
            // Stays below every small-group journey timeout.
            days = std::clamp<std::int32_t>(static_cast<std::int32_t>(std::lround(d)), 1, 15);
        }
        return std::max<std::int32_t>(days, static_cast<std::int32_t>(legs) - 1);
    }

    std::size_t random_stop(std::size_t origin, std::size_t previous) {
        for (;;) {
            const auto a = uniform_int<std::size_t>(0, cfg_.airports - 1);
            if (a != origin && a != previous) return a;
        }
    }

    // Legs on strictly increasing days; round trips end at the origin and never touch it earlier.
    std::vector<leg> plan_route(std::size_t origin, std::size_t legs, bool round, std::int32_t start,
                                std::int32_t days, const std::vector<std::int64_t>& avoid_first) {
        std::vector<std::size_t> stops{origin};
        for (std::size_t k = 0; k < legs; ++k) {
            const bool last = k + 1 == legs;
            if (round && last) {
                stops.push_back(origin);
                break;
            }
            std::size_t s;
            do {
                s = random_stop(origin, stops.back());
            } while (k == 0 && std::find(avoid_first.begin(), avoid_first.end(), static_cast<std::int64_t>(s)) !=
                                   avoid_first.end());
            stops.push_back(s);
        }
        std::vector<std::int32_t> days_at{start};
        if (legs >= 2) {
            std::vector<std::int32_t> inner;
            for (std::int32_t d = start + 1; d < start + days; ++d) inner.push_back(d);
            std::shuffle(inner.begin(), inner.end(), rng_);
            inner.resize(legs - 2);
            std::sort(inner.begin(), inner.end());
            days_at.insert(days_at.end(), inner.begin(), inner.end());
            days_at.push_back(start + days);
        }
        std::vector<leg> out;
        for (std::size_t k = 0; k < legs; ++k) out.push_back({stops[k], stops[k + 1], days_at[k]});
        return out;
    }

    std::string new_pnr() { return numbered("P", pnr_counter_++); }

    void book(const std::string& pnr_id, const std::vector<leg>& legs, const std::vector<passenger_id>& members) {
        for (const auto& l : legs) {
            sfpg_record r;
            r.sfpg_id = numbered("S", sfpg_counter_++);
            r.pnr_id = pnr_id;
            r.flight_id = airports_[l.from] + airports_[l.to] + std::to_string(uniform_int<int>(1, 3));
            r.flight_date = cfg_.window_start + l.day;
            r.origin = airports_[l.from];
            r.destination = airports_[l.to];
            r.passengers = members;
            records_.push_back(std::move(r));
        }
    }

    void record_journey(const std::vector<passenger_id>& members, bool round, const std::vector<leg>& legs,
                        std::int32_t rest_from) {
        const auto end = legs.back().day;
        for (auto p : members) {
            auto& s = people_[idx(p)];
            s.free_from = round ? end + 1 : std::max(end + 1, rest_from + cfg_.one_way_rest_days);
            s.avoid_first_stop = round ? -1 : static_cast<std::int64_t>(legs.front().from);
        }
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                auto& t = truth_.pairs[passenger_pair{members[a], members[b]}];
                ++t.journeys;
            }
        }
    }

    std::vector<std::int64_t> avoid_list(const std::vector<passenger_id>& members) const {
        std::vector<std::int64_t> out;
        for (auto p : members) {
            const auto a = people_[idx(p)].avoid_first_stop;
            if (a >= 0) out.push_back(a);
        }
        return out;
    }

    void book_clique_journey(const request& r) {
        const auto& clique = truth_.cliques[r.index];
        std::vector<passenger_id> members = clique;
        if (clique.size() > 2 && chance(cfg_.subset_journey_probability)) {
            std::shuffle(members.begin(), members.end(), rng_);
            members.resize(uniform_int<std::size_t>(2, clique.size() - 1));
            std::sort(members.begin(), members.end());
        }
        std::int32_t start = r.desired;
        for (auto p : members) start = std::max(start, people_[idx(p)].free_from);

        const bool round = chance(round_probability(members.size()));
        const auto legs = leg_count(round, false);
        const auto days = legs == 1 ? 0 : trip_days(members.size(), legs);
        if (start + days > cfg_.window_days - 1) return;

        const auto route = plan_route(clique_home_[r.index], legs, round, start, days, avoid_list(members));
        auto& bk = bookings_[r.index];
        const bool pack = !bk.last_pnr.empty() && bk.last_members == members && chance(cfg_.pack_journey_probability);
        const std::string pnr_id = pack ? bk.last_pnr : new_pnr();
        if (!pack) ++group_pnrs_;
        if (route.size() >= 2 && chance(cfg_.split_journey_probability)) {
            const auto cut = route.size() / 2;
            book(pnr_id, {route.begin(), route.begin() + static_cast<std::ptrdiff_t>(cut)}, members);
            bk.last_pnr = new_pnr();
            ++group_pnrs_;
            book(bk.last_pnr, {route.begin() + static_cast<std::ptrdiff_t>(cut), route.end()}, members);
        } else {
            book(pnr_id, route, members);
            bk.last_pnr = pnr_id;
        }
        bk.last_members = members;
        record_journey(members, round, route, start);
    }

    std::size_t tour_size() {
        if (tour_weights_.empty()) {
            for (std::size_t s = cfg_.large_group_size; s <= cfg_.tour_max_size; ++s) {
                double w = std::pow(static_cast<double>(s), -cfg_.tour_size_exponent);
                if (s % 5 == 0 && s >= 10 && s <= 35) w *= cfg_.five_multiple_boost;
                tour_weights_.push_back(w);
            }
        }
        return cfg_.large_group_size + pick_weighted(tour_weights_);
    }

    bool has_contact(passenger_id a, passenger_id b) const {
        if (a == b) return true;
        auto ca = truth_.clique_of.find(a);
        auto cb = truth_.clique_of.find(b);
        if (ca != truth_.clique_of.end() && cb != truth_.clique_of.end() && ca->second == cb->second) return true;
        return truth_.pairs.contains(passenger_pair::of(a, b));
    }

    bool fits(const std::vector<passenger_id>& group, passenger_id candidate) const {
        return std::none_of(group.begin(), group.end(), [&](passenger_id m) { return has_contact(m, candidate); });
    }

    void book_tour(const request& r) {
        const auto target = tour_size();
        const bool round = chance(round_probability(target));
        const auto legs = leg_count(round, true);
        const auto days = legs == 1 ? 0 : trip_days(target, legs);
        const std::int32_t start = std::min(r.desired, cfg_.window_days - 1 - days);
        if (start < 0) return;

        travel_group tour;
        tour.id = static_cast<std::uint32_t>(truth_.tours.size());
        std::vector<passenger_id> members;
        auto free_at_start = [&](passenger_id p) { return people_[idx(p)].free_from <= start; };

        const auto subgroup_seats = static_cast<std::size_t>(std::floor(static_cast<double>(target) * cfg_.tour_subgroup_share));
        std::vector<std::uint32_t> used_cliques;
        for (int attempt = 0; attempt < 50 && !truth_.cliques.empty(); ++attempt) {
            const auto room = subgroup_seats - std::min(subgroup_seats, members.size());
            if (room < 2) break;
            const auto c = uniform_int<std::uint32_t>(0, static_cast<std::uint32_t>(truth_.cliques.size() - 1));
            if (std::find(used_cliques.begin(), used_cliques.end(), c) != used_cliques.end()) continue;
            std::vector<passenger_id> free;
            for (auto p : truth_.cliques[c]) {
                if (free_at_start(p)) free.push_back(p);
            }
            if (free.size() < 2) continue;
            std::shuffle(free.begin(), free.end(), rng_);
            free.resize(uniform_int<std::size_t>(2, std::min(free.size(), room)));
            if (!std::all_of(free.begin(), free.end(), [&](passenger_id p) { return fits(members, p); })) continue;
            std::sort(free.begin(), free.end());
            used_cliques.push_back(c);
            members.insert(members.end(), free.begin(), free.end());
            tour.subgroups.push_back(std::move(free));
        }
        for (std::size_t attempt = 0; attempt < target * 20 && members.size() < target; ++attempt) {
            const auto p = pid(uniform_int<std::size_t>(0, cfg_.population - 1));
            if (!free_at_start(p) || !fits(members, p)) continue;
            members.push_back(p);
        }
        if (members.size() < cfg_.large_group_size) return;
        std::sort(members.begin(), members.end());

        const auto origin = uniform_int<std::size_t>(0, cfg_.airports - 1);
        const auto route = plan_route(origin, legs, round, start, days, avoid_list(members));
        ++group_pnrs_;
        book(new_pnr(), route, members);
        record_journey(members, round, route, start);
        tour.members = std::move(members);
        truth_.tours.push_back(std::move(tour));
    }

    void book_solo_travel() {
        const double f = cfg_.single_passenger_pnr_fraction;
        const auto solo = static_cast<std::size_t>(std::llround(static_cast<double>(group_pnrs_) * f / (1.0 - f)));
        for (std::size_t k = 0; k < solo; ++k) {
            const auto p = pid(uniform_int<std::size_t>(0, cfg_.population - 1));
            const bool round = chance(cfg_.round_probability_solo);
            const std::size_t legs = round ? 2 : 1;
            const std::int32_t days = round ? uniform_int<std::int32_t>(1, 7) : 0;
            const auto start = uniform_int<std::int32_t>(0, cfg_.window_days - 1 - days);
            const auto origin = uniform_int<std::size_t>(0, cfg_.airports - 1);
            book(new_pnr(), plan_route(origin, legs, round, start, days, {}), {p});
        }
    }

    void finalize_labels() {
        for (auto& [pair, t] : truth_.pairs) {
            t.acquainted = truth_.acquainted(pair);
            t.expected = t.acquainted || t.journeys >= 2 ? tie_label::active : tie_label::passive;
        }
    }

    const gen_config& cfg_;
    rng_t rng_;
    std::vector<person_schedule> people_;
    std::vector<std::string> airports_;
    std::vector<std::size_t> clique_home_;
    std::vector<clique_booking> bookings_;
    std::vector<double> tour_weights_;
    std::vector<sfpg_record> records_;
    ground_truth truth_;
    std::size_t pnr_counter_ = 0;
    std::size_t sfpg_counter_ = 0;
    std::size_t group_pnrs_ = 0;
};

} // namespace

void gen_config::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) throw error(error_kind::config, std::string(name) + " must lie in [0, 1]");
    };
    prob(clique_member_fraction, "clique_member_fraction");
    prob(frequent_clique_fraction, "frequent_clique_fraction");
    prob(subset_journey_probability, "subset_journey_probability");
    prob(split_journey_probability, "split_journey_probability");
    prob(pack_journey_probability, "pack_journey_probability");
    prob(round_probability_solo, "round_probability_solo");
    prob(round_probability_pair, "round_probability_pair");
    prob(round_probability_small_max, "round_probability_small_max");
    prob(round_probability_large, "round_probability_large");
    prob(long_tour_probability, "long_tour_probability");
    prob(tour_subgroup_share, "tour_subgroup_share");
    if (!(single_passenger_pnr_fraction >= 0.0 && single_passenger_pnr_fraction < 1.0)) {
        throw error(error_kind::config, "single_passenger_pnr_fraction must lie in [0, 1)");
    }
    if (noise_rate < 0.0) throw error(error_kind::config, "noise_rate must be non-negative");
    if (tour_subgroup_share >= 0.7) {
        throw error(error_kind::config, "tour_subgroup_share must stay below 0.7 so subgroups never look like the tour");
    }
    if (population < 2) throw error(error_kind::config, "population must be at least 2");
    if (airports < 3) throw error(error_kind::config, "at least 3 airports are required");
    if (window_days < 30) throw error(error_kind::config, "window must span at least 30 days");
    if (large_group_size < 3) throw error(error_kind::config, "large_group_size must be at least 3");
    if (tour_groups > 0 && large_group_size > population) {
        throw error(error_kind::config, "tour groups cannot be larger than the population");
    }
    if (tour_max_size < large_group_size || noise_max_size < large_group_size) {
        throw error(error_kind::config, "tour and noise sizes must reach the large-group size");
    }
    if (clique_size_weights.empty()) throw error(error_kind::config, "clique size distribution is empty");
    for (const auto& [size, w] : clique_size_weights) {
        if (size < 2 || size >= large_group_size) {
            throw error(error_kind::config, "clique sizes must lie in 2..large_group_size-1");
        }
        if (w < 0.0) throw error(error_kind::config, "clique size weights must be non-negative");
        if (size > population) throw error(error_kind::config, "clique size exceeds population");
    }
    if (frequent_min_journeys < 1 || frequent_max_journeys < frequent_min_journeys) {
        throw error(error_kind::config, "invalid frequent-journey range");
    }
    if (mean_extra_journeys < 0.0) throw error(error_kind::config, "mean_extra_journeys must be non-negative");
}

nlohmann::json to_json(const gen_config& cfg) {
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["population"] = cfg.population;
    j["window_start"] = cfg.window_start.to_iso();
    j["window_days"] = cfg.window_days;
    j["airports"] = cfg.airports;
    j["large_group_size"] = cfg.large_group_size;
    j["clique_member_fraction"] = cfg.clique_member_fraction;
    auto& w = j["clique_size_weights"] = nlohmann::json::object();
    for (const auto& [size, weight] : cfg.clique_size_weights) w[std::to_string(size)] = weight;
    j["mean_extra_journeys"] = cfg.mean_extra_journeys;
    j["frequent_clique_fraction"] = cfg.frequent_clique_fraction;
    j["frequent_min_journeys"] = cfg.frequent_min_journeys;
    j["frequent_max_journeys"] = cfg.frequent_max_journeys;
    j["subset_journey_probability"] = cfg.subset_journey_probability;
    j["split_journey_probability"] = cfg.split_journey_probability;
    j["pack_journey_probability"] = cfg.pack_journey_probability;
    j["round_probability_solo"] = cfg.round_probability_solo;
    j["round_probability_pair"] = cfg.round_probability_pair;
    j["round_probability_small_max"] = cfg.round_probability_small_max;
    j["round_probability_large"] = cfg.round_probability_large;
    j["small_duration_mean_pair"] = cfg.small_duration_mean_pair;
    j["small_duration_mean_max"] = cfg.small_duration_mean_max;
    j["small_duration_sd_pair"] = cfg.small_duration_sd_pair;
    j["small_duration_sd_max"] = cfg.small_duration_sd_max;
    j["large_duration_mean"] = cfg.large_duration_mean;
    j["large_duration_sd"] = cfg.large_duration_sd;
    j["long_tour_probability"] = cfg.long_tour_probability;
    j["long_tour_max_days"] = cfg.long_tour_max_days;
    j["one_way_rest_days"] = cfg.one_way_rest_days;
    j["tour_groups"] = cfg.tour_groups;
    j["tour_max_size"] = cfg.tour_max_size;
    j["tour_size_exponent"] = cfg.tour_size_exponent;
    j["five_multiple_boost"] = cfg.five_multiple_boost;
    j["tour_subgroup_share"] = cfg.tour_subgroup_share;
    j["single_passenger_pnr_fraction"] = cfg.single_passenger_pnr_fraction;
    j["noise_rate"] = cfg.noise_rate;
    j["noise_max_size"] = cfg.noise_max_size;
    return j;
}

gen_config gen_config_from_json(const nlohmann::json& j) {
    gen_config cfg;
    try {
        auto start = date::parse_iso(j.at("window_start").get<std::string>());
        if (!start) throw error(error_kind::config, "invalid window_start");
        cfg.window_start = *start;
        cfg.clique_size_weights.clear();
        for (const auto& [k, v] : j.at("clique_size_weights").items()) cfg.clique_size_weights[std::stoul(k)] = v.get<double>();
#define COTRAVEL_FIELD(name) j.at(#name).get_to(cfg.name)
        COTRAVEL_FIELD(seed);
        COTRAVEL_FIELD(population);
        COTRAVEL_FIELD(window_days);
        COTRAVEL_FIELD(airports);
        COTRAVEL_FIELD(large_group_size);
        COTRAVEL_FIELD(clique_member_fraction);
        COTRAVEL_FIELD(mean_extra_journeys);
        COTRAVEL_FIELD(frequent_clique_fraction);
        COTRAVEL_FIELD(frequent_min_journeys);
        COTRAVEL_FIELD(frequent_max_journeys);
        COTRAVEL_FIELD(subset_journey_probability);
        COTRAVEL_FIELD(split_journey_probability);
        COTRAVEL_FIELD(pack_journey_probability);
        COTRAVEL_FIELD(round_probability_solo);
        COTRAVEL_FIELD(round_probability_pair);
        COTRAVEL_FIELD(round_probability_small_max);
        COTRAVEL_FIELD(round_probability_large);
        COTRAVEL_FIELD(small_duration_mean_pair);
        COTRAVEL_FIELD(small_duration_mean_max);
        COTRAVEL_FIELD(small_duration_sd_pair);
        COTRAVEL_FIELD(small_duration_sd_max);
        COTRAVEL_FIELD(large_duration_mean);
        COTRAVEL_FIELD(large_duration_sd);
        COTRAVEL_FIELD(long_tour_probability);
        COTRAVEL_FIELD(long_tour_max_days);
        COTRAVEL_FIELD(one_way_rest_days);
        COTRAVEL_FIELD(tour_groups);
        COTRAVEL_FIELD(tour_max_size);
        COTRAVEL_FIELD(tour_size_exponent);
        COTRAVEL_FIELD(five_multiple_boost);
        COTRAVEL_FIELD(tour_subgroup_share);
        COTRAVEL_FIELD(single_passenger_pnr_fraction);
        COTRAVEL_FIELD(noise_rate);
        COTRAVEL_FIELD(noise_max_size);
#undef COTRAVEL_FIELD
    } catch (const nlohmann::json::exception& e) {
        throw error(error_kind::parse, std::string("generator config: ") + e.what());
    }
    return cfg;
}

bool ground_truth::acquainted(const passenger_pair& p) const {
    auto a = clique_of.find(p.u);
    auto b = clique_of.find(p.v);
    return a != clique_of.end() && b != clique_of.end() && a->second == b->second;
}

std::vector<passenger_pair> ground_truth::acquaintance_edges() const {
    std::vector<passenger_pair> out;
    for (const auto& c : cliques) {
        for (std::size_t a = 0; a < c.size(); ++a) {
            for (std::size_t b = a + 1; b < c.size(); ++b) out.push_back(passenger_pair::of(c[a], c[b]));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

const pair_truth* ground_truth::find(const passenger_pair& p) const {
    auto it = pairs.find(p);
    return it == pairs.end() ? nullptr : &it->second;
}

synthetic_data generate(const gen_config& cfg) {
    cfg.validate();
    generator g(cfg);
    auto out = g.run();
    if (cfg.noise_rate > 0.0) out.data = inject_noise(out.data, out.truth, cfg);
    return out;
}

dataset inject_noise(const dataset& d, ground_truth& truth, const gen_config& cfg) {
    cfg.validate();
    const auto groups = static_cast<std::size_t>(std::llround(cfg.noise_rate * static_cast<double>(cfg.tour_groups)));
    if (groups == 0) return d;

    rng_t rng(cfg.seed ^ 0xa9e7c1d3b5f60842ull);
    auto uniform_int = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    std::vector<sfpg_record> records(d.records().begin(), d.records().end());
    const auto& window = d.window();
    const auto span = static_cast<std::size_t>(window.end - window.start);

    auto contact = [&](passenger_id a, passenger_id b) {
        return a == b || truth.acquainted(passenger_pair::of(a, b)) || truth.pairs.contains(passenger_pair::of(a, b));
    };

    for (std::size_t g = 0; g < groups; ++g) {
        const auto target = uniform_int(cfg.large_group_size, cfg.noise_max_size);
        std::vector<passenger_id> members;
        for (std::size_t attempt = 0; attempt < target * 50 && members.size() < target; ++attempt) {
            const passenger_id p{uniform_int(1, cfg.population)};
            if (std::none_of(members.begin(), members.end(), [&](passenger_id m) { return contact(m, p); })) {
                members.push_back(p);
            }
        }
        if (members.size() < cfg.large_group_size) continue;
        std::sort(members.begin(), members.end());

        const auto from = uniform_int(0, cfg.airports - 1);
        auto to = uniform_int(0, cfg.airports - 2);
        if (to >= from) ++to;
        sfpg_record r;
        r.sfpg_id = numbered("SA", g);
        r.pnr_id = numbered("PA", g);
        r.origin = airport_code(from);
        r.destination = airport_code(to);
        r.flight_id = r.origin + r.destination + std::to_string(uniform_int(1, 3));
        r.flight_date = window.start + static_cast<std::int32_t>(uniform_int(0, span));
        r.passengers = members;
        records.push_back(std::move(r));

        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                auto& t = truth.pairs[passenger_pair{members[a], members[b]}];
                t.journeys = 1;
                t.acquainted = false;
                t.expected = tie_label::passive;
            }
        }
        travel_group group;
        group.id = static_cast<std::uint32_t>(truth.agency_groups.size());
        group.members = std::move(members);
        truth.agency_groups.push_back(std::move(group));
    }
    return dataset::from_records(std::move(records), window.start, window.end);
}

void write_truth_csv(std::ostream& out, const ground_truth& truth) {
    std::vector<std::pair<passenger_pair, tie_label>> rows;
    rows.reserve(truth.pairs.size());
    for (const auto& [pair, t] : truth.pairs) rows.emplace_back(pair, t.expected);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out << "u,v,expected_label\n";
    for (const auto& [pair, label] : rows) out << raw(pair.u) << ',' << raw(pair.v) << ',' << to_string(label) << '\n';
}

nlohmann::json truth_manifest(const ground_truth& truth) {
    auto ids = [](const std::vector<passenger_id>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (auto p : v) a.push_back(raw(p));
        return a;
    };
    auto groups = [&](const std::vector<travel_group>& gs) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& g : gs) {
            nlohmann::json subs = nlohmann::json::array();
            for (const auto& s : g.subgroups) subs.push_back(ids(s));
            a.push_back({{"id", g.id}, {"members", ids(g.members)}, {"subgroups", subs}});
        }
        return a;
    };
    nlohmann::json j;
    j["cliques"] = nlohmann::json::array();
    for (const auto& c : truth.cliques) j["cliques"].push_back(ids(c));
    j["tour_groups"] = groups(truth.tours);
    j["agency_groups"] = groups(truth.agency_groups);
    std::size_t passive = 0;
    for (const auto& [pair, t] : truth.pairs) {
        if (t.expected == tie_label::passive) ++passive;
    }
    j["co_travelling_pairs"] = truth.pairs.size();
    j["passive_pairs"] = passive;
    return j;
}

ground_truth read_truth_csv(std::istream& in) {
    ground_truth truth;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != "u,v,expected_label") throw parse_error(line_no, "unexpected ground-truth header");
            header = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw parse_error(line_no, "expected 3 fields");
        std::uint64_t u = 0, v = 0;
        auto parse = [&](std::size_t from, std::size_t to, std::uint64_t& out) {
            auto [ptr, ec] = std::from_chars(line.data() + from, line.data() + to, out);
            if (from == to || ec != std::errc{} || ptr != line.data() + to) throw parse_error(line_no, "invalid passenger id");
        };
        parse(0, c1, u);
        parse(c1 + 1, c2, v);
        auto label = parse_tie_label(std::string_view(line).substr(c2 + 1));
        if (!label) throw parse_error(line_no, "invalid expected_label");
        pair_truth t;
        t.expected = *label;
        truth.pairs[passenger_pair::of(passenger_id{u}, passenger_id{v})] = t;
    }
    return truth;
}

ground_truth read_truth_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw error(error_kind::missing, "cannot open ground-truth file " + path.string());
    return read_truth_csv(in);
}

} // namespace cotravel

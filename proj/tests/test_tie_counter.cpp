#include "cotravel/error.hpp"
#include "cotravel/inference.hpp"
#include "cotravel/tie_counter.hpp"
#include "support.hpp"

#include <random>
#include <sstream>

#include <doctest.h>

using namespace cotravel;
using namespace testing_support;

namespace {

const passenger_pair kPair{passenger_id{1}, passenger_id{2}};

dataset with_pnr_keys(std::vector<sfpg_record> rows) { return dataset::from_records(std::move(rows)); }

} // namespace

TEST_CASE("simple counts") {
    auto d = with_pnr_keys({rec("S1", "P1", 0, "AAA", "BBB", ids({1, 2})), rec("S2", "P1", 2, "BBB", "AAA", ids({1, 2})),
                            rec("S3", "P2", 9, "AAA", "CCC", ids({1, 2})), rec("S4", "P2", 11, "CCC", "AAA", ids({1, 2}))});
    pair_state s;
    count_simple(s, d.records()[0]);
    CHECK(s.co_sfpg == 1);
    CHECK(s.co_pnr == 1);
    count_simple(s, d.records()[1]);
    CHECK(s.co_sfpg == 2);
    CHECK(s.co_pnr == 1);
    count_simple(s, d.records()[2]);
    count_simple(s, d.records()[3]);
    CHECK(s.co_sfpg == 4);
    CHECK(s.co_pnr == 2);
}

TEST_CASE("a pnr seen again later does not count twice") {
    auto d = with_pnr_keys({rec("S1", "P1", 0, "AAA", "BBB", ids({1, 2})), rec("S2", "P2", 2, "BBB", "CCC", ids({1, 2})),
                            rec("S3", "P1", 9, "CCC", "AAA", ids({1, 2}))});
    pair_state s;
    for (const auto& r : d.records()) count_simple(s, r);
    CHECK(s.co_sfpg == 3);
    CHECK(s.co_pnr == 2);
}

TEST_CASE("co-journey counting rules") {
    SUBCASE("first large journey") {
        pair_state s;
        count_cojourney(s, journey_type::lpg);
        CHECK(s.jny.phase() == jny_phase::zero);
        CHECK(s.jny.count() == 0);
    }
    SUBCASE("first small journey") {
        pair_state s;
        count_cojourney(s, journey_type::spg);
        CHECK(s.jny.count() == 1);
    }
    SUBCASE("a second journey after a large one upgrades to two") {
        pair_state s;
        count_cojourney(s, journey_type::lpg);
        count_cojourney(s, journey_type::lpg);
        CHECK(s.jny.count() == 2);
        CHECK(s.jny.phase() == jny_phase::two);
    }
    SUBCASE("later journeys count one each") {
        pair_state s;
        count_cojourney(s, journey_type::spg);
        count_cojourney(s, journey_type::lpg);
        count_cojourney(s, journey_type::lpg);
        count_cojourney(s, journey_type::spg);
        CHECK(s.jny.count() == 4);
        CHECK(s.jny.phase() == jny_phase::more);
    }
}

TEST_CASE("counting matches the reference table for every short sequence") {
    std::size_t sequences = 0;
    for (std::size_t len = 1; len <= 6; ++len) {
        for (unsigned mask = 0; mask < (1u << len); ++mask) {
            std::vector<bool> flags;
            pair_state s;
            for (std::size_t i = 0; i < len; ++i) {
                const bool large = (mask >> i) & 1u;
                flags.push_back(large);
                count_cojourney(s, large ? journey_type::lpg : journey_type::spg);
                CHECK(static_cast<int>(s.jny.count()) == oracle::count_journeys(flags));
                CHECK(oracle::count_journeys(flags) == oracle::count_journeys_closed_form(flags));
            }
            ++sequences;
        }
    }
    CHECK(sequences == 126);
}

TEST_CASE("labels") {
    auto label_after = [](std::vector<journey_type> events) {
        pair_state s;
        s.co_sfpg = 1;
        for (auto t : events) count_cojourney(s, t);
        return label_tie(kPair, s).label;
    };
    CHECK(label_after({journey_type::lpg}) == tie_label::passive);
    CHECK(label_after({journey_type::spg}) == tie_label::active);
    CHECK(label_after({journey_type::spg, journey_type::spg, journey_type::lpg, journey_type::spg, journey_type::lpg}) ==
          tie_label::active);
    pair_state empty;
    empty.co_sfpg = 1;
    CHECK_THROWS_AS(label_tie(kPair, empty), error);
}

TEST_CASE("two small round trips in two pnrs") {
    auto d = dataset::from_records({rec("S1", "P1", 0, "AAA", "BBB", ids({1, 2})), rec("S2", "P1", 3, "BBB", "AAA", ids({1, 2})),
                                    rec("S3", "P2", 40, "AAA", "CCC", ids({1, 2})), rec("S4", "P2", 44, "CCC", "AAA", ids({1, 2}))});
    auto ties = infer(d, thresholds{}).ties;
    REQUIRE(ties.size() == 1);
    CHECK(ties[0] == tie_record{kPair, 4, 2, 2, tie_label::active});
}

TEST_CASE("tie csv round trip") {
    std::vector<tie_record> ties{{kPair, 3, 2, 1, tie_label::active},
                                 {passenger_pair{passenger_id{2}, passenger_id{9}}, 1, 1, 0, tie_label::passive}};
    std::ostringstream out;
    write_ties_csv(out, ties);
    CHECK(out.str() == "u,v,co_sfpg,co_pnr,co_jny,label\n1,2,3,2,1,active\n2,9,1,1,0,passive\n");
    std::istringstream in(out.str());
    CHECK(read_ties_csv(in) == ties);
    std::istringstream bad("u,v,co_sfpg,co_pnr,co_jny,label\n5,2,1,1,0,passive\n");
    CHECK_THROWS_AS(read_ties_csv(bad), parse_error);
}

TEST_CASE("invariants over random streams") {
    thresholds th;
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        auto d = random_pair_sequence(rng, 40);
        pair_tracker tracker(th);
        for (std::size_t i = 0; i < d.records().size(); ++i) {
            tracker.advance(d.records().subspan(i, 1));
            tracker.for_each_state([](const passenger_pair&, const pair_state& s) { CHECK(s.co_pnr <= s.co_sfpg); });
        }
        tracker.flush();
        for (const auto& t : tracker.ties()) {
            CHECK(t.co_pnr >= 1);
            CHECK((t.label == tie_label::passive) == (t.co_jny == 0));
        }
    }
}

TEST_CASE("inference agrees with the whole-dataset reference") {
    thresholds th;
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        auto d = random_pair_sequence(rng, 40);
        auto ties = infer(d, th).ties;
        auto ref = oracle::infer_ties(to_oracle(d), to_oracle(th));
        REQUIRE(ties.size() == ref.size());
        for (const auto& t : ties) {
            const auto& r = ref.at({raw(t.pair.u), raw(t.pair.v)});
            CHECK(t.co_sfpg == r.shared_groups);
            CHECK(t.co_pnr == r.shared_bookings);
            CHECK(static_cast<int>(t.co_jny) == r.journeys);
            CHECK((t.label == tie_label::active) == r.active);
        }
    }
}

TEST_CASE("shards and chunks do not change results") {
    thresholds th;
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        auto d = random_pair_sequence(rng, 50);
        auto one = infer(d, th, {1, true, 500});
        auto four = infer(d, th, {4, true, 500});
        CHECK(one.ties == four.ties);
        REQUIRE(one.events.size() == four.events.size());

        pair_tracker tracker(th);
        const auto n = d.records().size();
        const auto cut = n / 3;
        tracker.advance(d.records().subspan(0, cut));
        tracker.advance(d.records().subspan(cut));
        tracker.flush();
        CHECK(tracker.ties() == one.ties);
    }
}

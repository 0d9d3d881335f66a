#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "mfmp/minreflux.hpp"

using namespace mfmp;
using testutil::bundled;

namespace {

std::vector<std::uint8_t> k_from_interval(int q, int c) {
    std::vector<std::uint8_t> k(c + 1, 0);
    for (int i = q; i <= c + 1; ++i) k[i - 1] = 1;
    return k;
}

const ConstraintRecord* find_record(const FeasibilityReport& rep, const std::string& id) {
    for (const auto& sf : rep.per_stream)
        for (const auto& r : sf.records)
            if (r.id == id) return &r;
    return nullptr;
}

}  // namespace

TEST_CASE("feed index set from indicator vectors") {
    // five-component illustrative configuration: q_top = 2, q_bot = 4
    auto it = feed_index_set(k_from_interval(2, 5), k_from_interval(4, 5));
    CHECK(it == std::set<int>{2, 3, 4});

    // equal pinch intervals in interval 1: empty set
    CHECK(feed_index_set(k_from_interval(1, 3), k_from_interval(1, 3)).empty());

    // ordering violated
    CHECK_THROWS_AS(feed_index_set(k_from_interval(3, 3), k_from_interval(2, 3)),
                    PinchOrderViolation);
}

TEST_CASE("sidedraw index set mirrors the feed definition") {
    CHECK(sidedraw_index_set(k_from_interval(3, 3), k_from_interval(2, 3)) == std::set<int>{2, 3});
    CHECK(sidedraw_index_set(k_from_interval(4, 3), k_from_interval(4, 3)).empty());
    CHECK_THROWS_AS(sidedraw_index_set(k_from_interval(2, 3), k_from_interval(3, 3)),
                    PinchOrderViolation);
}

TEST_CASE("index sets of the bundled columns match the published ones") {
    auto m1 = build_model(bundled("ex1_scenario1"));
    CHECK(m1.index_sets[0] == std::set<int>{2, 3});
    CHECK(m1.index_sets[1] == std::set<int>{3});

    auto m2 = build_model(bundled("ex2"));
    CHECK(m2.index_sets[0] == std::set<int>{2});     // upper sidedraw
    CHECK(m2.index_sets[1] == std::set<int>{2, 3});  // feed
    CHECK(m2.index_sets[2] == std::set<int>{2, 3});  // lower sidedraw
}

TEST_CASE("K-based index sets equal the interval-range definition") {
    // exhaustive sweep over all admissible pinch-interval pairs, c <= 6
    for (int c = 2; c <= 6; ++c) {
        for (int q_top = 1; q_top <= c + 1; ++q_top) {
            for (int q_bot = q_top; q_bot <= c + 1; ++q_bot) {
                auto got = feed_index_set(k_from_interval(q_top, c), k_from_interval(q_bot, c));
                std::set<int> want;
                for (int i = std::max(2, q_top); i <= std::min(c, q_bot); ++i) want.insert(i);
                CHECK(got == want);
                // sidedraw form with the roles swapped
                auto got_s =
                    sidedraw_index_set(k_from_interval(q_bot, c), k_from_interval(q_top, c));
                CHECK(got_s == want);
            }
        }
    }
}

TEST_CASE("feed records around the two-feed minimum") {
    auto model = build_model(bundled("ex1_scenario1"));
    const int nsec = model.spec.section_count();

    SUBCASE("binding pair at the minimum") {
        auto ev = evaluate_at(model, nsec, 165.947);
        REQUIRE(ev.structurally_feasible);
        CHECK(ev.report.feasible);
        auto* up = find_record(ev.report, "F1:i=3:upper");
        auto* lo = find_record(ev.report, "F1:i=3:lower");
        REQUIRE(up);
        REQUIRE(lo);
        CHECK(up->status == ConstraintStatus::Binding);
        CHECK(lo->status == ConstraintStatus::Binding);             // triple equality
        CHECK(up->right == doctest::Approx(3.6190).epsilon(1e-3));  // the pinned stream root
    }

    SUBCASE("all upper-feed records strictly satisfied at larger duty") {
        auto ev = evaluate_at(model, nsec, 180.0);
        REQUIRE(ev.structurally_feasible);
        for (const auto& sf : ev.report.per_stream) {
            if (sf.stream != "F1") continue;
            for (const auto& r : sf.records) CHECK(r.slack > 0.0);
        }
    }

    SUBCASE("below the minimum the column is infeasible") {
        auto ev = evaluate_at(model, nsec, 150.0);
        bool violated = !ev.structurally_feasible;
        if (ev.structurally_feasible)
            for (const auto& sf : ev.report.per_stream)
                for (const auto& r : sf.records)
                    violated |= r.status == ConstraintStatus::Violated;
        CHECK(violated);
    }
}

TEST_CASE("sidedraw records for the one-feed, two-draw column") {
    auto model = build_model(bundled("ex2"));
    const double v_min = 110.795;

    SUBCASE("binding profile records at the minimum") {
        auto ev = evaluate_at(model, model.spec.section_count(), v_min);
        REQUIRE(ev.structurally_feasible);
        CHECK(ev.report.feasible);
        auto* a = find_record(ev.report, "S1:i=3:profile-top-in");
        auto* b = find_record(ev.report, "S1:i=3:profile-bot-in");
        REQUIRE(a);
        REQUIRE(b);
        CHECK(a->status == ConstraintStatus::Binding);
        CHECK(b->status == ConstraintStatus::Binding);
        CHECK(a->right == doctest::Approx(4.0777).epsilon(1e-3));
    }

    SUBCASE("satisfied with slack at R = 3") {
        const double v = 30.0 * 4.0;  // D (R + 1)
        auto ev = evaluate_at(model, 1, v);
        REQUIRE(ev.structurally_feasible);
        CHECK(ev.report.feasible);
        for (const auto& sf : ev.report.per_stream)
            for (const auto& r : sf.records)
                if (r.stream == "S1") CHECK(r.slack > 0.0);
    }

    SUBCASE("dropping the profile family loses the sidedraw control") {
        CheckOptions no_profile;
        no_profile.sidedraw_on_profile = false;
        const double v_relaxed = 30.0 * (2.533 + 1.0);
        auto ev = evaluate_at(model, 1, v_relaxed, no_profile);
        REQUIRE(ev.structurally_feasible);
        CHECK(ev.report.feasible);  // accepted without the profile family
        auto ev_full = evaluate_at(model, 1, v_relaxed);
        CHECK(!ev_full.report.feasible);  // rejected with it
    }
}

TEST_CASE("streams without coverage contribute no records") {
    auto model = build_model(bundled("ex2"));
    // S2 carries only the two heaviest components; its index set references
    // rho_2 which does not exist, so only the i = 2 pair remains.
    auto ev = evaluate_at(model, 1, 130.0);
    REQUIRE(ev.structurally_feasible);
    bool any_s2 = false;
    for (const auto& sf : ev.report.per_stream) {
        if (sf.stream != "S2") continue;
        for (const auto& r : sf.records) {
            any_s2 = true;
            CHECK(r.i == 2);
        }
    }
    CHECK(any_s2);
}

TEST_CASE("monotone slack of feed records in the reboiler duty") {
    auto model = build_model(bundled("ex1_scenario1"));
    const int nsec = model.spec.section_count();
    std::map<std::string, double> last;
    for (double v = 166.0; v <= 320.0; v += 7.7) {
        auto ev = evaluate_at(model, nsec, v);
        REQUIRE(ev.structurally_feasible);
        for (const auto& sf : ev.report.per_stream) {
            for (const auto& r : sf.records) {
                if (r.family != ConstraintFamily::FeedUpper &&
                    r.family != ConstraintFamily::FeedLower)
                    continue;
                auto it = last.find(r.id);
                if (it != last.end()) CHECK(r.slack >= it->second - 1e-9);
                last[r.id] = r.slack;
            }
        }
    }
}

TEST_CASE("every case-study spec is strictly satisfied at twice its minimum duty") {
    const std::pair<const char*, double> cases[] = {{"ex1_scenario1", 165.947},
                                                    {"ex1_scenario2", 140.813},
                                                    {"ex2", 110.795},
                                                    {"ex3_fixed", 110.130}};
    for (const auto& [name, vmin] : cases) {
        auto model = build_model(bundled(name));
        auto ev = evaluate_at(model, model.spec.section_count(), 2.0 * vmin);
        REQUIRE(ev.structurally_feasible);
        for (const auto& sf : ev.report.per_stream)
            for (const auto& r : sf.records) CHECK(r.slack > 0.0);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mfmp/roots.hpp"

using namespace mfmp;
using testutil::scan_roots;

namespace {

ComponentSystem make_cs(std::vector<double> alphas) {
    ComponentSystem cs;
    cs.alphas = std::move(alphas);
    return cs;
}

// Random net-flow vector with the canonical sign pattern for a given c.
std::vector<double> random_pattern(std::mt19937& rng, int c) {
    std::uniform_int_distribution<int> hdist(0, c);
    std::uniform_real_distribution<double> mag(0.05, 3.0);
    std::uniform_int_distribution<int> zdist(0, 4);
    for (;;) {
        const int h = hdist(rng);
        std::uniform_int_distribution<int> ldist(h + 1, c + 1);
        const int l = ldist(rng);
        std::vector<double> d(c, 0.0);
        bool nonzero = false;
        for (int i = 1; i <= c; ++i) {
            if (i <= h)
                d[i - 1] = -mag(rng);
            else if (i >= l)
                d[i - 1] = mag(rng);
            else
                d[i - 1] = 0.0;
            if (zdist(rng) == 0) d[i - 1] = 0.0;  // sprinkle extra zeros
            nonzero |= d[i - 1] != 0.0;
        }
        if (nonzero) return d;
    }
}

std::vector<double> random_alphas(std::mt19937& rng, int c) {
    std::uniform_real_distribution<double> gap(0.3, 2.5);
    std::vector<double> a{1.0};
    for (int i = 1; i < c; ++i) a.push_back(a.back() + gap(rng));
    return a;
}

}  // namespace

TEST_CASE("five-component illustrative pattern: pinch locations and values") {
    auto cs = make_cs({1, 2, 3, 4, 5});
    const double V = 8.0;

    SUBCASE("section above the feed") {
        std::vector<double> d{-0.4, 0.1, 0.2, 0.3, 0.2};
        auto rs = solve_characteristic(d, V, cs);
        CHECK(rs.pinch_interval == 2);  // pinch between alpha_1 and alpha_2
        // oracle: brute-force scan of each pole-free interval
        auto f = [&](double g) { return eval_characteristic(d, cs.alphas, g) - V; };
        std::vector<double> oracle;
        for (int k = 0; k <= 5; ++k) {
            const double lo = k == 0 ? 1e-9 : cs.alphas[k - 1] + 1e-9;
            const double hi = k == 5 ? 60.0 : cs.alphas[k] - 1e-9;
            for (double r : scan_roots(f, lo, hi, 40000)) oracle.push_back(r);
        }
        REQUIRE(oracle.size() == rs.gamma.size());
        for (std::size_t i = 0; i < oracle.size(); ++i)
            CHECK(rs.gamma[i] == doctest::Approx(oracle[i]).epsilon(1e-10));
    }

    SUBCASE("section below the feed") {
        std::vector<double> d{-0.5, -0.4, -0.3, 0.2, 0.1};
        auto rs = solve_characteristic(d, V, cs);
        CHECK(rs.pinch_interval == 4);  // between alpha_3 and alpha_4
        CHECK(rs.pinch_index == 4);
    }
}

TEST_CASE("degenerate tie at an interval boundary") {
    // c = 2, d = (0, 5), V = 10: the solved root coincides with alpha_1 = 1.
    auto cs = make_cs({1.0, 2.0});
    auto rs = solve_characteristic({0.0, 5.0}, 10.0, cs);
    REQUIRE(rs.gamma.size() == 2);
    CHECK(rs.gamma[0] == doctest::Approx(1.0).epsilon(1e-9));  // pinned at alpha_1
    CHECK(rs.pinned[0]);
    CHECK(rs.gamma[1] == doctest::Approx(1.0).epsilon(1e-9));  // solved, lands on alpha_1
    CHECK(rs.boundary_tie);
}

TEST_CASE("single-term equation has the closed-form root") {
    auto cs = make_cs({1.0, 2.0, 4.0});
    // only the heaviest component flows (down): gamma = alpha_1 (1 + |d|/V)
    auto rs = solve_characteristic({-20.0, 0.0, 0.0}, 110.79, cs);
    CHECK(rs.gamma[0] == doctest::Approx(1.0 + 20.0 / 110.79).epsilon(1e-12));
    CHECK(rs.pinned[1]);
    CHECK(rs.pinned[2]);
    CHECK(rs.pinch_index == 1);
    CHECK(rs.pinch_interval == 2);

    // only the lightest flows (up): closed form gamma = alpha_c (1 - d/V)
    auto rs2 = solve_characteristic({0.0, 0.0, 30.0}, 120.0, cs);
    CHECK(rs2.gamma[2] == doctest::Approx(4.0 * (1.0 - 30.0 / 120.0)).epsilon(1e-12));
}

TEST_CASE("interlacing property over random admissible sections") {
    std::mt19937 rng(20240817);
    int tested = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int c = 2 + trial % 5;  // c in 2..6
        auto cs = make_cs(random_alphas(rng, c));
        auto d = random_pattern(rng, c);
        std::uniform_real_distribution<double> vmag(0.5, 50.0);
        const double V = vmag(rng);
        RootSet rs;
        try {
            rs = solve_characteristic(d, V, cs);
        } catch (const BracketFailure&) {
            continue;  // no real roots at this V: legitimately infeasible
        }
        ++tested;
        REQUIRE(static_cast<int>(rs.gamma.size()) == c);
        // ascending with ties only at pinned values
        for (int i = 1; i < c; ++i) CHECK(rs.gamma[i] >= rs.gamma[i - 1] - 1e-12);
        // residual property for non-pinned roots away from poles
        for (int i = 0; i < c; ++i) {
            if (rs.pinned[i]) {
                // pinned roots sit exactly at a zero-flow alpha
                bool at_alpha = false;
                for (int m = 0; m < c; ++m)
                    if (d[m] == 0.0 && cs.alphas[m] == rs.gamma[i]) at_alpha = true;
                CHECK(at_alpha);
                continue;
            }
            double dist = 1e300;
            for (double a : cs.alphas) dist = std::min(dist, std::abs(rs.gamma[i] - a));
            if (dist > 1e-7) {
                const double resid = eval_characteristic(d, cs.alphas, rs.gamma[i]) - V;
                CHECK(std::abs(resid) <= 1e-8 * V);
            }
        }
        // Eq.-2 interval structure, via the sign pattern
        auto [h, l] = classify_sign_pattern(d);
        const int q = pinch_interval_from_pattern(h, l, c);
        CHECK(rs.pinch_interval == q);
        const double glo = q == 1 ? 0.0 : cs.alphas[q - 2];
        const double ghi = q == c + 1 ? rs.upper_bound + 1.0 : cs.alphas[q - 1];
        CHECK(rs.pinch_root() >= glo - 1e-9);
        CHECK(rs.pinch_root() <= ghi + 1e-9);
    }
    CHECK(tested > 700);  // most random sections must actually be solvable
}

TEST_CASE("non-pinned roots move monotonically with V") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int c = 3 + trial % 3;
        auto cs = make_cs(random_alphas(rng, c));
        auto d = random_pattern(rng, c);
        const double V = 10.0;
        RootSet a, b, m;
        try {
            a = solve_characteristic(d, V, cs);
            m = solve_characteristic(d, V * 1.005, cs);
            b = solve_characteristic(d, V * 1.01, cs);
        } catch (const BracketFailure&) {
            continue;
        }
        for (int i = 0; i < c; ++i) {
            if (a.pinned[i]) continue;
            const double d1 = m.gamma[i] - a.gamma[i];
            const double d2 = b.gamma[i] - m.gamma[i];
            if (std::abs(d1) > 1e-12 && std::abs(d2) > 1e-12) CHECK(d1 * d2 > 0.0);
        }
    }
}

TEST_CASE("stream roots of the bundled quaternary column") {
    auto spec = validate_spec(testutil::bundled("ex3_fixed"));
    ComponentSystem cs = spec.components;

    // lower feed: three components present, two interior roots
    auto f2 = solve_stream_roots(spec.streams[2], cs);
    CHECK(f2.has(1));
    CHECK(f2.has(2));
    CHECK(!f2.has(3));
    CHECK(f2.at(1) > 1.0);
    CHECK(f2.at(1) < 2.3);
    CHECK(f2.at(2) > 2.3);
    CHECK(f2.at(2) < 5.361);

    // sidedraw: two components, a single root
    auto s1 = solve_stream_roots(spec.streams[1], cs);
    CHECK(s1.rho.size() == 1);
    CHECK(s1.at(2) == doctest::Approx(3.41378).epsilon(1e-4));
    CHECK_THROWS_AS(s1.at(1), MissingRho);

    // upper feed is saturated vapor: roots rho_2 and rho_3
    auto f1 = solve_stream_roots(spec.streams[0], cs);
    CHECK(f1.has(2));
    CHECK(f1.has(3));

    // liquid-form and full-stream-form roots agree for equilibrium streams
    auto f1_full = solve_stream_roots(spec.streams[0], cs, StreamRootForm::FullStreamForm);
    CHECK(f1_full.at(2) == doctest::Approx(f1.at(2)).epsilon(1e-9));
    CHECK(f1_full.at(3) == doctest::Approx(f1.at(3)).epsilon(1e-9));
    // the full form adds the root at zero for a saturated vapor
    CHECK(f1_full.has(0));
    CHECK(f1_full.at(0) == doctest::Approx(0.0));
}

TEST_CASE("form equivalence for partially vaporized streams") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const int c = 3 + trial % 3;
        auto cs = make_cs(random_alphas(rng, c));
        std::uniform_real_distribution<double> mag(0.5, 5.0);
        StreamSpec s;
        s.kind = StreamKind::Feed;
        s.thermal = ThermalState::PartiallyVaporized;
        s.flows.resize(c);
        for (double& f : s.flows) f = mag(rng);
        std::uniform_real_distribution<double> qd(0.1, 0.9);
        flash_split(cs.alphas, s.flows, qd(rng), s.liquid_flows, s.vapor_flows);

        auto liq = solve_stream_roots(s, cs, StreamRootForm::LiquidForm);
        auto full = solve_stream_roots(s, cs, StreamRootForm::FullStreamForm);
        for (const auto& [m, rho] : liq.rho) {
            REQUIRE(full.has(m));
            CHECK(full.at(m) == doctest::Approx(rho).epsilon(1e-9));
        }
    }
}

TEST_CASE("empty streams are rejected") {
    auto cs = make_cs({1.0, 2.0});
    StreamSpec s;
    s.kind = StreamKind::Feed;
    s.flows = {0.0, 0.0};
    s.liquid_flows = {0.0, 0.0};
    s.vapor_flows = {0.0, 0.0};
    CHECK_THROWS_AS(solve_stream_roots(s, cs), EmptyStream);
}

TEST_CASE("indicator vectors from the pinch interval") {
    auto cs = make_cs({1.0, 2.25, 5.1168});
    // rectifying-style: pinch in interval 2
    auto rs = solve_characteristic({0.0, 2.6238, 49.8522}, 165.95, cs);
    std::vector<std::uint8_t> mu, k;
    classify_and_indicators(rs, 3, mu, k);
    CHECK(mu == std::vector<std::uint8_t>{0, 1, 0, 0});
    CHECK(k == std::vector<std::uint8_t>{0, 1, 1, 1});

    // all-down edge: pinch in the topmost interval
    auto rs2 = solve_characteristic({-80.0, -67.3762, -0.1478}, 165.95, cs);
    classify_and_indicators(rs2, 3, mu, k);
    CHECK(mu == std::vector<std::uint8_t>{0, 0, 0, 1});
    CHECK(k == std::vector<std::uint8_t>{0, 0, 0, 1});
    CHECK(rs2.pinch_index == 3);

    // middle section of the two-feed column: both roots in interval 3
    auto rs3 = solve_characteristic({-10.0, -57.3762, 19.8522}, 165.95, cs);
    classify_and_indicators(rs3, 3, mu, k);
    CHECK(mu == std::vector<std::uint8_t>{0, 0, 1, 0});
    CHECK(rs3.pinch_index == 3);
    CHECK(rs3.interval[1] == 3);
    CHECK(rs3.interval[2] == 3);
}

TEST_CASE("no real roots in the pinch interval signals infeasibility") {
    auto cs = make_cs({1.0, 2.25, 5.1168});
    // far below the critical vapor flow of this mixed section
    CHECK_THROWS_AS(solve_characteristic({-10.0, -57.3762, 19.8522}, 100.0, cs), BracketFailure);
}

TEST_CASE("nonpositive vapor flow is rejected") {
    auto cs = make_cs({1.0, 2.0});
    CHECK_THROWS_AS(solve_characteristic({-1.0, 1.0}, 0.0, cs), NonpositiveV);
    CHECK_THROWS_AS(solve_characteristic({-1.0, 1.0}, -5.0, cs), NonpositiveV);
}

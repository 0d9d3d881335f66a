#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "mfmp/types.hpp"

using namespace mfmp;
using testutil::bundled;

TEST_CASE("validate accepts the bundled two-feed column") {
    auto spec = validate_spec(bundled("ex1_scenario1"));
    CHECK(spec.section_count() == 3);
    CHECK(spec.components.count() == 3);
    // closure-derived bottoms
    auto b = spec.bottoms();
    CHECK(b[0] == doctest::Approx(80.0));
    CHECK(b[1] == doctest::Approx(67.3762));
    CHECK(b[2] == doctest::Approx(0.1478));
}

TEST_CASE("validate rejects a distillate that outruns the feed") {
    auto spec = bundled("ex1_scenario1");
    spec.distillate[2] = 60.0;  // hexane fed: 50 mol/s
    CHECK_THROWS_AS(validate_spec(spec), MassBalanceViolation);
}

TEST_CASE("validate accepts the quaternary column with four sections") {
    auto spec = validate_spec(bundled("ex3_fixed"));
    CHECK(spec.section_count() == 4);
    CHECK(spec.streams[0].thermal == ThermalState::SaturatedVapor);
    CHECK(spec.streams[0].total_vapor() == doctest::Approx(100.0));
}

TEST_CASE("alphas must start at one and increase") {
    auto spec = bundled("ex1_scenario1");
    spec.components.alphas[0] = 1.1;
    CHECK_THROWS_AS(validate_spec(spec), BadAlphas);
    spec.components.alphas = {1.0, 5.0, 2.0};
    CHECK_THROWS_AS(validate_spec(spec), BadAlphas);
}

TEST_CASE("net flows by section: one feed, two sidedraws") {
    auto spec = validate_spec(bundled("ex2"));
    auto secs = net_flows_all_sections(spec);
    REQUIRE(secs.size() == 4);
    // (octane, heptane, hexane) ascending volatility
    CHECK(secs[0].net_flows == std::vector<double>{0.0, 6.0, 24.0});
    CHECK(secs[1].net_flows == std::vector<double>{0.0, 30.0, 30.0});
    CHECK(secs[2].net_flows == std::vector<double>{-30.0, -10.0, 0.0});
    CHECK(secs[3].net_flows == std::vector<double>{-20.0, 0.0, 0.0});

    // brute-force cross-check: d^{k} = distillate - sum of streams above k
    for (std::size_t k = 0; k < secs.size(); ++k) {
        for (int i = 0; i < 3; ++i) {
            double expect = spec.distillate[i];
            for (std::size_t j = 0; j + 1 < k + 1; ++j) expect -= spec.streams[j].flows[i];
            CHECK(secs[k].net_flows[i] == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("net flows: single feed with the distillate taking the whole feed") {
    nlohmann::json j = nlohmann::json::parse(R"({
        "components": [{"name":"a","alpha":1.0},{"name":"b","alpha":2.0}],
        "feeds": [{"position":1,"flows":{"a":1.0,"b":3.0}}],
        "distillate": {"flows": {"a":1.0,"b":3.0}}
    })");
    auto spec = validate_spec(spec_from_json(j));
    auto secs = net_flows_all_sections(spec);
    REQUIRE(secs.size() == 2);
    CHECK(secs[0].net_flows == spec.streams[0].flows);  // all feed rises
    CHECK(secs[1].net_flows == std::vector<double>{0.0, 0.0});
}

TEST_CASE("net flows for the two-feed column, upper section pair") {
    auto spec = validate_spec(bundled("ex1_scenario1"));
    auto secs = net_flows_all_sections(spec);
    CHECK(secs[0].net_flows[0] == doctest::Approx(0.0));
    CHECK(secs[0].net_flows[1] == doctest::Approx(2.6238));
    CHECK(secs[0].net_flows[2] == doctest::Approx(49.8522));
    CHECK(secs[1].net_flows[0] == doctest::Approx(-10.0));
    CHECK(secs[1].net_flows[1] == doctest::Approx(-57.3762));
    CHECK(secs[1].net_flows[2] == doctest::Approx(19.8522));
}

TEST_CASE("vapor balances: saturated-liquid feeds leave V unchanged") {
    auto spec = validate_spec(bundled("ex1_scenario1"));
    auto v = vapor_balance_propagate(spec, spec.section_count(), 165.95);
    for (double vk : v) CHECK(vk == doctest::Approx(165.95));
}

TEST_CASE("vapor balances: a vapor feed adds its flow upward") {
    auto spec = validate_spec(bundled("ex3_fixed"));
    auto v = vapor_balance_propagate(spec, 4, 110.14);
    CHECK(v[3] == doctest::Approx(110.14));
    CHECK(v[2] == doctest::Approx(110.14));
    CHECK(v[1] == doctest::Approx(110.14));
    CHECK(v[0] == doctest::Approx(210.14));
}

TEST_CASE("vapor balances: anchor round trip is exact") {
    auto spec = validate_spec(bundled("ex3_fixed"));
    auto v = vapor_balance_propagate(spec, 1, 200.0);
    auto v2 = vapor_balance_propagate(spec, spec.section_count(), v.back());
    for (int k = 0; k < spec.section_count(); ++k) CHECK(v[k] == doctest::Approx(v2[k]));
}

TEST_CASE("vapor balances reject a collapsed section") {
    auto spec = validate_spec(bundled("ex3_fixed"));
    CHECK_THROWS_AS(vapor_balance_propagate(spec, 1, 50.0), NonpositiveSectionVapor);
}

TEST_CASE("reflux from reboiler duty") {
    auto spec = validate_spec(bundled("ex1_scenario1"));
    CHECK(reflux_from_reboiler_duty(spec, 165.95) == doctest::Approx(2.162).epsilon(1e-3));
    // V1 = 2 D  =>  R = 1
    CHECK(reflux_from_reboiler_duty(spec, 2.0 * spec.distillate_total()) == doctest::Approx(1.0));
    CHECK_THROWS_AS(reflux_from_reboiler_duty(spec, 10.0), NonpositiveReflux);
}

TEST_CASE("hypothetical liquid") {
    // single component: unchanged
    auto l = hypothetical_liquid({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0});
    CHECK(l[0] == 0.0);
    CHECK(l[1] == 0.0);
    CHECK(l[2] == doctest::Approx(1.0));

    // two components, direct formula
    auto l2 = hypothetical_liquid({1.0, 1.0}, {1.0, 2.0});
    CHECK(l2[0] == doctest::Approx(2.0 / 3.0));
    CHECK(l2[1] == doctest::Approx(1.0 / 3.0));

    // quaternary vapor feed: proportional to v/alpha, sums to one
    std::vector<double> alphas{1.0, 2.300, 5.361, 12.332};
    std::vector<double> v{0.0, 40.0, 30.0, 30.0};
    auto l3 = hypothetical_liquid(v, alphas);
    double sum = 0.0;
    for (double x : l3) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 1; i < 4; ++i)
        CHECK(l3[i] * (v[1] / alphas[1]) == doctest::Approx(l3[1] * (v[i] / alphas[i])));

    CHECK_THROWS_AS(hypothetical_liquid({0.0, 0.0}, {1.0, 2.0}), ZeroVapor);

    // idempotence up to normalization: the equilibrium vapor of l maps back to l
    // when pushed through the transform again with v proportional to alpha*l
    std::vector<double> v_eq(4);
    for (int i = 0; i < 4; ++i) v_eq[i] = alphas[i] * l3[i];
    auto l4 = hypothetical_liquid(v_eq, alphas);
    for (int i = 0; i < 4; ++i) CHECK(l4[i] == doctest::Approx(l3[i]).epsilon(1e-12));
}

TEST_CASE("partially vaporized feeds carry an equilibrium split") {
    std::vector<double> alphas{1.0, 2.25, 5.1168};
    std::vector<double> f{10.0, 60.0, 30.0};
    std::vector<double> l, v;
    flash_split(alphas, f, 0.4, l, v);
    double vt = 0.0, lt = 0.0;
    for (int i = 0; i < 3; ++i) {
        vt += v[i];
        lt += l[i];
        CHECK(l[i] + v[i] == doctest::Approx(f[i]).epsilon(1e-12));
    }
    CHECK(vt == doctest::Approx(0.4 * 100.0).epsilon(1e-10));
    CHECK(lt == doctest::Approx(0.6 * 100.0).epsilon(1e-10));
    // v proportional to alpha * l with a single scalar
    const double s = v[0] / (alphas[0] * l[0]);
    for (int i = 1; i < 3; ++i) CHECK(v[i] == doctest::Approx(s * alphas[i] * l[i]).epsilon(1e-9));
}

TEST_CASE("sign pattern classification") {
    CHECK(classify_sign_pattern({-1.0, 0.0, 2.0}) == std::pair<int, int>{1, 3});
    CHECK(classify_sign_pattern({1.0, 2.0, 3.0}) == std::pair<int, int>{0, 1});
    CHECK(classify_sign_pattern({-1.0, -2.0, -3.0}) == std::pair<int, int>{3, 4});
    CHECK_THROWS_AS(classify_sign_pattern({1.0, -1.0}), SignPatternViolation);
    CHECK(pinch_interval_from_pattern(1, 3, 3) == 3);
    CHECK(pinch_interval_from_pattern(3, 4, 3) == 4);
}

TEST_CASE("scale covariance of balances") {
    auto spec = validate_spec(bundled("ex1_scenario1"));
    auto scaled = spec;
    const double lam = 3.5;
    for (auto& s : scaled.streams)
        for (double& f : s.flows) f *= lam;
    for (double& d : scaled.distillate) d *= lam;
    scaled = validate_spec(scaled);

    auto secs = net_flows_all_sections(spec);
    auto secs2 = net_flows_all_sections(scaled);
    for (std::size_t k = 0; k < secs.size(); ++k)
        for (int i = 0; i < 3; ++i)
            CHECK(secs2[k].net_flows[i] == doctest::Approx(lam * secs[k].net_flows[i]));

    const double r1 = reflux_from_reboiler_duty(spec, 170.0);
    const double r2 = reflux_from_reboiler_duty(scaled, lam * 170.0);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
}

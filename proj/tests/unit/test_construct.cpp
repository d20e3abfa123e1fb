#include <doctest.h>

#include <cmath>

#include "cid/construct.hpp"
#include "cid/examples.hpp"
#include "cid/incentives.hpp"
#include "cid/random_gen.hpp"
#include "cid/solver.hpp"
#include "cid/text_format.hpp"
#include "oracles.hpp"

using namespace cid;

namespace {

CidGraph example(const char* name) { return parse_cid(builtin_example(name)); }

// Every deterministic policy of `model` attains exactly `v`: both the maximum
// and (via negated utilities) the minimum equal v.
void check_all_policies_tie(const CidModel& model, double v) {
    CHECK(optimal_value(model).value == doctest::Approx(v).epsilon(1e-12));
    CidModel negated = model;
    for (const auto& n : model.graph.nodes()) {
        if (n.kind != NodeKind::Utility)
            continue;
        Domain dom;
        for (const auto& val : model.domains.at(n.id).values)
            dom.values.push_back(Value::from_number(-val.number));
        negated.domains.at(n.id) = dom;
    }
    CHECK(optimal_value(negated).value == doctest::Approx(-v).epsilon(1e-12));
}

} // namespace

TEST_CASE("completeness construction is worth exactly one observation") {
    CidGraph g = example("fitness-obs");
    CidModel m = completeness_construction(g, "PhysAct");
    CHECK(value_of_information(m, "PhysAct") == doctest::Approx(1.0).epsilon(1e-12));
    // Without access to PhysAct every policy ties at zero.
    check_all_policies_tie(m, 0.0);
    // With the link, some policy reaches 1 and none exceeds it.
    CHECK(optimal_value(m, std::string("PhysAct"), std::nullopt).value ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("completeness construction rejects nodes without the incentive") {
    try {
        completeness_construction(example("fitness-obs"), "EstWalk");
        FAIL("construction produced without incentive");
    } catch (const CidError& e) {
        CHECK(e.code() == ErrorCode::NoIncentive);
    }
}

TEST_CASE("completeness construction through the collider chain") {
    CidGraph g = example("method-graph");
    for (const char* id : {"X", "Y_1", "Y_2", "Z_2"}) {
        CidModel m = completeness_construction(g, id);
        CHECK_MESSAGE(value_of_information(m, id) == doctest::Approx(1.0).epsilon(1e-12), id);
    }
}

TEST_CASE("flipping every coin leaves the other observations unchanged") {
    // For X = Y_1 the backdoor is Y_1 -> Y_2 <- X -> U: coins at Y_1 and X,
    // the collider Y_2 their product. Negating both coins is invisible to
    // every observation other than Y_1 itself.
    CidGraph g = example("method-graph");
    CidModel m = completeness_construction(g, "Y_1");
    CHECK(m.domains.at("Y_1").size() == 2);
    CHECK(m.domains.at("X").size() == 2);
    CHECK(m.domains.at("Z_2").size() == 1); // off the supporting pair
    testing::JointOracle oracle(m, testing::random_decision_rows(m, 99));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                double p = oracle.probability({{"Y_1", a}, {"X", b}, {"Y_2", c}});
                double flipped = oracle.probability({{"Y_1", 1 - a}, {"X", 1 - b}, {"Y_2", c}});
                CHECK(p == doctest::Approx(flipped).epsilon(1e-12));
            }
}

TEST_CASE("control construction on a bare chain is worth exactly one") {
    CidGraph g("chain");
    g.add_node("X", NodeKind::Chance);
    g.add_node("M", NodeKind::Chance);
    g.add_node("U", NodeKind::Utility);
    g.add_node("D", NodeKind::Decision);
    g.add_edge("X", "M");
    g.add_edge("M", "U");
    g.add_edge("D", "U"); // the decision must exist; it has no leverage here
    CidModel m = control_construction(g, "X");
    CHECK(optimal_value(m).value == doctest::Approx(0.0));
    CHECK(value_of_control(m, "X") == doctest::Approx(1.0));
}

TEST_CASE("control construction covers all three proof cases") {
    CidGraph g = example("fitness-int");
    // Direct path: case 1.
    CHECK(value_of_control(control_construction(g, "PhysAct"), "PhysAct") > 0.1);
    // Requisite observation: case 2.
    CHECK(requisite_observations(g).count("StepCount"));
    CHECK(value_of_control(control_construction(g, "StepCount"), "StepCount") > 0.1);
    // Ancestor of a requisite observation: case 3.
    CHECK(value_of_control(control_construction(g, "TrackerFirmware"), "TrackerFirmware") > 0.1);
}

TEST_CASE("control construction refuses nodes without the incentive") {
    try {
        control_construction(example("fitness-int"), "EstimationFormula");
        FAIL("construction produced without incentive");
    } catch (const CidError& e) {
        CHECK(e.code() == ErrorCode::NoIncentive);
    }
}

TEST_CASE("control construction for the indirect-only tracker designer") {
    CidGraph g = example("obs-vs-int");
    CHECK(intervention_incentive(g, "TrackerDesigner") == InterventionClass::Indirect);
    CidModel m = control_construction(g, "TrackerDesigner");
    CHECK(optimal_value(m).value == doctest::Approx(0.0));
    CHECK(value_of_control(m, "TrackerDesigner") > 0.1);
}

TEST_CASE("constructed models satisfy the model invariants and round-trip") {
    CidGraph g = example("fitness-int");
    CidModel m = completeness_construction(g, "TrackerFirmware");
    check_model(m);
    CidModel again = parse_model(serialize_model(m), ParseOptions{.max_domain_size = 0});
    CHECK(serialize_model(again) == serialize_model(m));
    CHECK(value_of_information(again, "TrackerFirmware") == doctest::Approx(1.0));
}

TEST_CASE("differential check on a small random corpus") {
    int completeness_cases = 0, control_cases = 0;
    for (std::uint64_t seed = 1000; seed < 1060; ++seed) {
        CidGraph g = random_graph(2 + static_cast<int>(seed % 5), 0.4, seed);
        std::string d = single_decision(g);
        auto desc = relatives(g, d, Direction::Descendants);
        for (const auto& n : g.nodes()) {
            if (n.id == d)
                continue;
            if (!desc.count(n.id) && observation_incentive(g, n.id)) {
                CidModel m = completeness_construction(g, n.id);
                CHECK(std::abs(value_of_information(m, n.id) - 1.0) <= 1e-9);
                ++completeness_cases;
            }
            if (intervention_incentive(g, n.id) != InterventionClass::None) {
                CidModel m = control_construction(g, n.id);
                CHECK(value_of_control(m, n.id) > 0.1);
                ++control_cases;
            }
        }
    }
    CHECK(completeness_cases > 20);
    CHECK(control_cases > 20);
}

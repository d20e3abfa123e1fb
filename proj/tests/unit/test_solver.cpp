#include <doctest.h>

#include <cmath>

#include "cid/examples.hpp"
#include "cid/random_gen.hpp"
#include "cid/solver.hpp"
#include "cid/text_format.hpp"
#include "oracles.hpp"

using namespace cid;

namespace {

// Three-node fixture: S uniform on {-1,1}, U = S * D, S observed.
const char* kFixture = R"(cid fixture
node S chance
node D decision
node U utility
edge S -> D
edge S -> U
edge D -> U
domain S -1 1
domain D -1 1
domain U -1 1
cpt S
  : 0.5 0.5
cpt U
  -1 -1 : 0 1
  -1 1 : 1 0
  1 -1 : 1 0
  1 1 : 0 1
)";

CidModel fixture() { return parse_model(kFixture); }

Policy copy_s() { return Policy{"D", {"S"}, {0, 1}}; }
Policy always_one() { return Policy{"D", {"S"}, {1, 1}}; }

} // namespace

TEST_CASE("joint queries on the product fixture") {
    CidModel m = fixture();
    CHECK(joint_query(m, copy_s(), std::nullopt, {{"U", "1"}}) == doctest::Approx(1.0));
    CHECK(joint_query(m, always_one(), std::nullopt, {{"U", "1"}}) == doctest::Approx(0.5));
    CHECK(joint_query(m, always_one(), std::nullopt, {}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(joint_query(m, copy_s(), std::nullopt, {{"U", "7"}}), CidError);
}

TEST_CASE("joint marginals are consistent") {
    CidGraph g = random_graph(5, 0.4, 42);
    CidModel m = random_model(g, 3, 43);
    Policy uniform_rule{single_decision(g), m.graph.parents(single_decision(g)), {}};
    long long rows = 1;
    for (const auto& p : uniform_rule.context)
        rows *= m.domains.at(p).size();
    uniform_rule.rule.assign(rows, 0);
    for (const auto& n : g.nodes()) {
        double total = 0.0;
        for (const auto& v : m.domains.at(n.id).values)
            total += joint_query(m, uniform_rule, std::nullopt, {{n.id, v.text}});
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("policy values on the product fixture") {
    CidModel m = fixture();
    CHECK(policy_value(m, copy_s()) == doctest::Approx(1.0));
    CHECK(policy_value(m, always_one()) == doctest::Approx(0.0));
}

TEST_CASE("constant-zero utilities value every policy at zero") {
    std::string text = "cid t\nnode S chance\nnode D decision\nnode U utility\n"
                       "edge S -> D\nedge S -> U\nedge D -> U\n"
                       "domain S -1 1\ndomain D -1 1\ndomain U 0\n"
                       "cpt S\n  : 0.5 0.5\ncpt U\n  -1 -1 : 1\n  -1 1 : 1\n  1 -1 : 1\n  1 1 : 1\n";
    CidModel m = parse_model(text);
    CHECK(policy_value(m, copy_s()) == doctest::Approx(0.0));
    CHECK(optimal_value(m).value == doctest::Approx(0.0));
}

TEST_CASE("optimal policy copies the observation") {
    CidModel m = fixture();
    OptimalResult r = optimal_value(m);
    CHECK(r.value == doctest::Approx(1.0));
    CHECK(r.policy.rule == std::vector<int>{0, 1});
}

TEST_CASE("dropping the information link forces the tie-broken constant policy") {
    CidModel m = fixture();
    OptimalResult r = optimal_value(m, std::nullopt, std::string("S"));
    CHECK(r.value == doctest::Approx(0.0));
    CHECK(r.policy.context.empty());
    CHECK(r.policy.rule == std::vector<int>{0});
}

TEST_CASE("policy is irrelevant without an influenceable utility") {
    std::string text = "cid t\nnode S chance\nnode D decision\nnode U utility\n"
                       "edge S -> D\nedge S -> U\n"
                       "domain S 0 1\ndomain D 0 1\ndomain U 0 1\n"
                       "cpt S\n  : 0.25 0.75\ncpt U\n  0 : 1 0\n  1 : 0 1\n";
    CidModel m = parse_model(text);
    CHECK(optimal_value(m).value == doctest::Approx(0.75));
    CHECK(policy_value(m, Policy{"D", {"S"}, {0, 1}}) == doctest::Approx(0.75));
}

TEST_CASE("value of information on the fixture is exactly one") {
    CidModel m = fixture();
    CHECK(value_of_information(m, "S") == doctest::Approx(1.0));
    CHECK_THROWS_AS(value_of_information(m, "U"), CidError);
    CHECK_THROWS_AS(value_of_information(m, "D"), CidError);
}

TEST_CASE("edits are idempotent") {
    CidModel m = fixture();
    CHECK(optimal_value(m, std::string("S"), std::nullopt).value ==
          doctest::Approx(optimal_value(m).value));
    std::string text = "cid t\nnode A chance\nnode S chance\nnode D decision\nnode U utility\n"
                       "edge S -> D\nedge S -> U\nedge D -> U\nedge A -> S\n"
                       "domain A 0 1\ndomain S -1 1\ndomain D -1 1\ndomain U -1 1\n"
                       "cpt A\n  : 0.5 0.5\n"
                       "cpt S\n  0 : 0.5 0.5\n  1 : 0.5 0.5\n"
                       "cpt U\n  -1 -1 : 0 1\n  -1 1 : 1 0\n  1 -1 : 1 0\n  1 1 : 0 1\n";
    CidModel m2 = parse_model(text);
    CHECK(optimal_value(m2, std::nullopt, std::string("A")).value ==
          doctest::Approx(optimal_value(m2).value));
}

TEST_CASE("adding a link to a decision descendant is refused") {
    CidModel m = fixture();
    try {
        optimal_value(m, std::string("U"), std::nullopt);
        FAIL("cycle-creating edit accepted");
    } catch (const CidError& e) {
        CHECK(e.code() == ErrorCode::EditCreatesCycle);
    }
}

TEST_CASE("d-separated nodes carry no value of information") {
    CidGraph g = parse_cid(builtin_example("fitness-obs"));
    for (std::uint64_t seed = 10; seed < 16; ++seed) {
        CidModel m = random_model(g, 2, seed);
        CHECK(value_of_information(m, "EstWalk") <= 1e-9);
    }
}

TEST_CASE("value of control on the fixture without the information link") {
    std::string text = "cid fixture2\nnode S chance\nnode D decision\nnode U utility\n"
                       "edge S -> U\nedge D -> U\n"
                       "domain S -1 1\ndomain D -1 1\ndomain U -1 1\n"
                       "cpt S\n  : 0.5 0.5\n"
                       "cpt U\n  -1 -1 : 0 1\n  -1 1 : 1 0\n  1 -1 : 1 0\n  1 1 : 0 1\n";
    CidModel m = parse_model(text);
    CHECK(optimal_value(m).value == doctest::Approx(0.0));
    CHECK(value_of_control(m, "S") == doctest::Approx(1.0));
    CHECK_THROWS_AS(value_of_control(m, "D"), CidError);
}

TEST_CASE("nodes without a utility path carry no value of control") {
    CidGraph g = parse_cid(builtin_example("fitness-int"));
    for (std::uint64_t seed = 20; seed < 24; ++seed) {
        CidModel m = random_model(g, 2, seed);
        CHECK(value_of_control(m, "EstimationFormula") <= 1e-9);
        CHECK(value_of_control(m, "EstWalk") <= 1e-9);
    }
}

TEST_CASE("VoI and VoC are nonnegative on random models") {
    for (std::uint64_t seed = 500; seed < 520; ++seed) {
        CidGraph g = random_graph(2 + static_cast<int>(seed % 5), 0.5, seed);
        CidModel m = random_model(g, 2, seed + 1);
        std::string d = single_decision(g);
        auto desc = relatives(g, d, Direction::Descendants);
        for (const auto& n : g.nodes()) {
            if (n.id == d)
                continue;
            CHECK(value_of_control(m, n.id) >= 0.0);
            if (!desc.count(n.id))
                CHECK(value_of_information(m, n.id) >= 0.0);
        }
    }
}

TEST_CASE("random stochastic policies never beat the deterministic optimum") {
    for (std::uint64_t seed = 600; seed < 605; ++seed) {
        CidGraph g = random_graph(4 + static_cast<int>(seed % 3), 0.5, seed);
        CidModel m = random_model(g, 2, seed + 1);
        double best = optimal_value(m).value;
        for (std::uint64_t trial = 0; trial < 100; ++trial) {
            testing::JointOracle oracle(m, testing::random_decision_rows(m, seed * 1000 + trial));
            CHECK(oracle.expected_utility({}) <= best + 1e-9);
        }
    }
}

TEST_CASE("positive affine utility scaling preserves the argmax and scales the values") {
    for (std::uint64_t seed = 650; seed < 656; ++seed) {
        CidGraph g = random_graph(4, 0.5, seed);
        CidModel m = random_model(g, 2, seed + 1);
        const double a = 2.5, b = -0.75;
        CidModel scaled = m;
        int utilities = 0;
        for (const auto& n : g.nodes()) {
            if (n.kind != NodeKind::Utility)
                continue;
            ++utilities;
            Domain dom;
            for (const auto& v : scaled.domains.at(n.id).values)
                dom.values.push_back(Value::from_number(a * v.number + b));
            scaled.domains.at(n.id) = dom;
        }
        OptimalResult plain = optimal_value(m);
        OptimalResult after = optimal_value(scaled);
        CHECK(after.policy.rule == plain.policy.rule);
        CHECK(after.value == doctest::Approx(a * plain.value + b * utilities));
        std::string d = single_decision(g);
        auto desc = relatives(g, d, Direction::Descendants);
        for (const auto& n : g.nodes()) {
            if (n.id == d)
                continue;
            CHECK(value_of_control(scaled, n.id) ==
                  doctest::Approx(a * value_of_control(m, n.id)));
            if (!desc.count(n.id))
                CHECK(value_of_information(scaled, n.id) ==
                      doctest::Approx(a * value_of_information(m, n.id)));
        }
    }
}

TEST_CASE("the joint enumeration refuses oversized state spaces") {
    CidGraph g = random_graph(10, 0.3, 7);
    CidModel m = random_model(g, 4, 8);
    try {
        optimal_value(m);
        FAIL("oversized model accepted");
    } catch (const CidError& e) {
        CHECK(e.code() == ErrorCode::StateSpaceTooLarge);
    }
}

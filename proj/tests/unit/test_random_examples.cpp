#include <doctest.h>

#include "cid/dot.hpp"
#include "cid/examples.hpp"
#include "cid/incentives.hpp"
#include "cid/random_gen.hpp"
#include "cid/text_format.hpp"

using namespace cid;

TEST_CASE("random graphs are deterministic in the seed") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CidGraph a = random_graph(6, 0.4, seed);
        CidGraph b = random_graph(6, 0.4, seed);
        CHECK(serialize_cid(a) == serialize_cid(b));
    }
    CHECK(serialize_cid(random_graph(6, 0.4, 1)) != serialize_cid(random_graph(6, 0.4, 2)));
}

TEST_CASE("random graphs satisfy the construction guarantees") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        double p = (seed % 3) * 0.35; // 0, 0.35, 0.7
        CidGraph g = random_graph(2 + static_cast<int>(seed % 9), p, seed);
        CHECK(g.is_acyclic());
        CHECK(g.decision_nodes().size() == 1);
        CHECK(g.utility_nodes().size() == 1);
        CHECK(validate(g).ok);
    }
}

TEST_CASE("random graph parameters are checked") {
    CHECK_THROWS_AS(random_graph(1, 0.4, 0), CidError);
    CHECK_THROWS_AS(random_graph(11, 0.4, 0), CidError);
    CHECK_THROWS_AS(random_graph(5, -0.1, 0), CidError);
    CHECK_THROWS_AS(random_model(random_graph(4, 0.4, 0), 1, 0), CidError);
    CHECK_THROWS_AS(random_model(random_graph(4, 0.4, 0), 5, 0), CidError);
}

TEST_CASE("random models are deterministic, normalized and strictly positive") {
    CidGraph g = random_graph(6, 0.5, 77);
    CidModel a = random_model(g, 3, 78);
    CidModel b = random_model(g, 3, 78);
    CHECK(serialize_model(a) == serialize_model(b));
    for (const auto& [id, cpt] : a.cpts) {
        for (const auto& row : cpt.rows) {
            double sum = 0.0;
            for (double v : row) {
                CHECK(v > 0.0);
                sum += v;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("every built-in example parses and validates") {
    for (const auto& name : builtin_example_names()) {
        CidGraph g = parse_cid(builtin_example(name));
        CHECK_MESSAGE(validate(g).ok, name);
        CHECK(g.name() == name);
    }
    CHECK_THROWS_AS(builtin_example("nope"), CidError);
}

TEST_CASE("the MDP example honors horizon and freezing") {
    CidGraph g2 = parse_cid(builtin_example("mdp-theta", 2));
    CHECK(g2.decision_nodes() == std::vector<std::string>{"D_1", "D_2"});
    CHECK(g2.has_edge("D_1", "D_2"));
    CHECK(g2.has_edge("S_1", "D_2"));
    CHECK(g2.has_edge("Theta", "S_3"));
    CHECK(!validate(g2).warnings.empty());

    CidGraph frozen = parse_cid(builtin_example("mdp-theta", 3, "D_2"));
    CHECK(frozen.decision_nodes() == std::vector<std::string>{"D_2"});
    CHECK(frozen.kind("D_1") == NodeKind::Chance);
    CHECK_THROWS_AS(builtin_example("mdp-theta", 2, "D_9"), CidError);
    CHECK_THROWS_AS(builtin_example("mdp-theta", 0), CidError);
}

TEST_CASE("DOT output styles nodes by kind and marks incentives") {
    CidGraph g = parse_cid(builtin_example("fitness-obs"));
    IncentiveReport report = analyze(g);
    std::string dot = serialize_dot(g, &report);
    CHECK(dot.find("StepCount [shape=ellipse, color=blue") != std::string::npos);
    CHECK(dot.find("EstWalk [shape=ellipse]") != std::string::npos);
    CHECK(dot.find("D [shape=box]") != std::string::npos);
    CHECK(dot.find("Fitness [shape=doubleoctagon") != std::string::npos);
    CHECK(dot.find("StepCount -> D [style=dashed];") != std::string::npos);
    CHECK(dot.find("PhysAct -> Fitness;") != std::string::npos);

    std::string plain = serialize_dot(g);
    CHECK(plain.find("color=blue") == std::string::npos);
    CHECK(plain.find("style=dashed") != std::string::npos);

    CidGraph qa_graph = parse_cid(builtin_example("qa-standard"));
    IncentiveReport qa_report = analyze(qa_graph);
    std::string qa = serialize_dot(qa_graph, &qa_report);
    CHECK(qa.find("WorldState [shape=ellipse, fillcolor=orange, style=filled]") !=
          std::string::npos);

    CidGraph fit_graph = parse_cid(builtin_example("fitness-int"));
    IncentiveReport fit_report = analyze(fit_graph);
    std::string fit_int = serialize_dot(fit_graph, &fit_report);
    CHECK(fit_int.find("StepCount [shape=ellipse, color=blue, penwidth=2, fillcolor=lightblue, "
                       "style=filled]") != std::string::npos);
}

TEST_CASE("a report for a different graph is rejected") {
    CidGraph g = parse_cid(builtin_example("fitness-obs"));
    IncentiveReport report = analyze(parse_cid(builtin_example("qa-standard")));
    try {
        serialize_dot(g, &report);
        FAIL("mismatched report accepted");
    } catch (const CidError& e) {
        CHECK(e.code() == ErrorCode::ReportGraphMismatch);
    }
}

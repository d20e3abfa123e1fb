#include <doctest.h>

#include "cid/examples.hpp"
#include "cid/incentives.hpp"
#include "cid/random_gen.hpp"
#include "cid/text_format.hpp"

using namespace cid;

namespace {

CidGraph example(const char* name) { return parse_cid(builtin_example(name)); }

} // namespace

TEST_CASE("observation incentives in the fitness tracker graph") {
    CidGraph g = example("fitness-obs");
    CHECK(observation_incentive(g, "PhysAct"));
    CHECK(observation_incentive(g, "StepCount"));
    CHECK(!observation_incentive(g, "EstWalk"));
    // The decision and its descendants are out of the criterion's domain.
    CHECK_THROWS_AS(observation_incentive(g, "D"), CidError);
    try {
        observation_incentive(g, "Fitness");
        FAIL("descendant accepted");
    } catch (const CidError& e) {
        CHECK(e.code() == ErrorCode::NodeDescendsFromDecision);
    }
}

TEST_CASE("observation incentives in the marking-procedure graph") {
    CidGraph g = example("method-graph");
    for (const char* id : {"X", "Y_1", "Y_2", "Z_2"})
        CHECK_MESSAGE(observation_incentive(g, id), id);
    CHECK(!observation_incentive(g, "Z_1"));
}

TEST_CASE("gender is inferred only by the biased university") {
    CHECK(!observation_incentive(example("fair-unbiased"), "Gender"));
    CHECK(observation_incentive(example("fair-biased"), "Gender"));
}

TEST_CASE("requisite observations") {
    CHECK(requisite_observations(example("fitness-obs")) == std::set<std::string>{"StepCount"});
    CHECK(requisite_observations(example("method-graph")) ==
          std::set<std::string>{"Y_2", "Z_2"});

    // No influenceable utility: nothing is requisite.
    CidGraph g("t");
    g.add_node("O", NodeKind::Chance);
    g.add_node("D", NodeKind::Decision);
    g.add_node("U", NodeKind::Utility);
    g.add_edge("O", "D");
    g.add_edge("O", "U");
    CHECK(requisite_observations(g).empty());
}

TEST_CASE("reduced graph removes exactly the nonrequisite links") {
    CidGraph g = example("fitness-obs");
    CidGraph reduced = reduced_graph(g);
    CHECK(!reduced.has_edge("EstWalk", "D"));
    CHECK(reduced.has_edge("StepCount", "D"));
    CHECK(reduced.edge_count() == g.edge_count() - 1);

    // All parents requisite: identical graph.
    CidGraph qa = example("qa-standard");
    CidGraph qa_reduced = reduced_graph(qa);
    CHECK(qa_reduced.edge_count() == qa.edge_count());
    CHECK(qa_reduced.has_edge("Query", "Answer"));
}

TEST_CASE("requisite set is stable under reduction") {
    for (const char* name : {"fitness-obs", "fitness-int", "obs-vs-int", "method-graph",
                             "fair-unbiased", "fair-biased", "qa-standard"}) {
        CidGraph g = example(name);
        CHECK_MESSAGE(requisite_observations(g) == requisite_observations(reduced_graph(g)),
                      name);
    }
}

TEST_CASE("intervention classification in the fitness intervention graph") {
    CidGraph g = example("fitness-int");
    CHECK(intervention_incentive(g, "PhysAct") == InterventionClass::Direct);
    CHECK(intervention_incentive(g, "Fitness") == InterventionClass::Direct);
    CHECK(intervention_incentive(g, "StepCount") == InterventionClass::Indirect);
    CHECK(intervention_incentive(g, "TrackerFirmware") == InterventionClass::Indirect);
    CHECK(intervention_incentive(g, "EstimationFormula") == InterventionClass::None);
    CHECK(intervention_incentive(g, "EstWalk") == InterventionClass::None);
    CHECK_THROWS_AS(intervention_incentive(g, "D"), CidError);
}

TEST_CASE("observation and intervention incentives deviate") {
    CidGraph g = example("obs-vs-int");
    CHECK(intervention_incentive(g, "TrackerDesigner") == InterventionClass::Indirect);
    CHECK(intervention_incentive(g, "DirtyGymClothes") == InterventionClass::None);
    CHECK(observation_incentive(g, "DirtyGymClothes"));
    CHECK(!observation_incentive(g, "TrackerDesigner"));
}

TEST_CASE("QA-system modes change the world-state incentive") {
    CHECK(intervention_incentive(example("qa-standard"), "WorldState") ==
          InterventionClass::Direct);
    CHECK(intervention_incentive(example("qa-read"), "WorldState") == InterventionClass::None);
    CHECK(intervention_incentive(example("qa-reward"), "WorldState") ==
          InterventionClass::Direct);
}

TEST_CASE("golden classification of the QA-system figures") {
    auto yes = ObservationStatus::Yes;
    auto no = ObservationStatus::No;
    auto na = ObservationStatus::NotApplicable;

    IncentiveReport standard = analyze(example("qa-standard"));
    CHECK(standard.nodes.at("Query") == NodeIncentives{yes, yes, InterventionClass::Direct});
    CHECK(standard.nodes.at("Answer") ==
          NodeIncentives{na, na, InterventionClass::NotApplicable});
    CHECK(standard.nodes.at("WorldState") == NodeIncentives{na, na, InterventionClass::Direct});
    CHECK(standard.nodes.at("Reward") == NodeIncentives{na, na, InterventionClass::Direct});

    // Read mode: the reward is cut off, so nothing is worth observing or
    // controlling except the reward node itself (trivially).
    IncentiveReport read = analyze(example("qa-read"));
    CHECK(read.nodes.at("Query") == NodeIncentives{no, no, InterventionClass::None});
    CHECK(read.nodes.at("WorldState") == NodeIncentives{na, na, InterventionClass::None});
    CHECK(read.nodes.at("Reward") == NodeIncentives{no, na, InterventionClass::Direct});

    // Reward mode: the answer is never read, so the world state keeps its
    // incentive but can no longer be influenced through the answer.
    IncentiveReport reward = analyze(example("qa-reward"));
    CHECK(reward.nodes.at("Query") == NodeIncentives{yes, yes, InterventionClass::Direct});
    CHECK(reward.nodes.at("WorldState") == NodeIncentives{yes, na, InterventionClass::Direct});
    CHECK(reward.nodes.at("Reward") == NodeIncentives{na, na, InterventionClass::Direct});
}

TEST_CASE("golden observation marking of the obs-vs-int figure") {
    IncentiveReport report = analyze(example("obs-vs-int"));
    std::set<std::string> marked;
    for (const auto& [id, cell] : report.nodes)
        if (cell.observation == ObservationStatus::Yes)
            marked.insert(id);
    CHECK(marked == std::set<std::string>{"PhysAct", "StepCount", "TrackerFirmware",
                                          "DirtyGymClothes"});
}

TEST_CASE("golden observation marking of the fairness figures") {
    IncentiveReport unbiased = analyze(example("fair-unbiased"));
    CHECK(unbiased.nodes.at("Department").observation == ObservationStatus::Yes);
    CHECK(unbiased.nodes.at("Gender").observation == ObservationStatus::No);
    IncentiveReport biased = analyze(example("fair-biased"));
    CHECK(biased.nodes.at("Department").observation == ObservationStatus::Yes);
    CHECK(biased.nodes.at("Gender").observation == ObservationStatus::Yes);
}

TEST_CASE("analyze fills the full report for the fitness intervention graph") {
    IncentiveReport report = analyze(example("fitness-int"));
    auto cell = [&](const char* id) { return report.nodes.at(id); };
    CHECK(cell("PhysAct").observation == ObservationStatus::Yes);
    CHECK(cell("StepCount").observation == ObservationStatus::Yes);
    CHECK(cell("TrackerFirmware").observation == ObservationStatus::Yes);
    CHECK(cell("EstWalk").observation == ObservationStatus::No);
    CHECK(cell("EstimationFormula").observation == ObservationStatus::No);
    CHECK(cell("Fitness").observation == ObservationStatus::NotApplicable);
    CHECK(cell("D").observation == ObservationStatus::NotApplicable);

    CHECK(cell("StepCount").requisite == ObservationStatus::Yes);
    CHECK(cell("EstWalk").requisite == ObservationStatus::No);
    CHECK(cell("PhysAct").requisite == ObservationStatus::NotApplicable);

    CHECK(cell("D").intervention == InterventionClass::NotApplicable);
    CHECK(cell("PhysAct").intervention == InterventionClass::Direct);
    CHECK(cell("StepCount").intervention == InterventionClass::Indirect);
}

TEST_CASE("analyze requires exactly one decision") {
    CidGraph g("t");
    g.add_node("U", NodeKind::Utility);
    try {
        analyze(g);
        FAIL("no-decision graph accepted");
    } catch (const CidError& e) {
        CHECK(e.code() == ErrorCode::NotSingleDecision);
    }
}

TEST_CASE("the MDP example with one live decision gives Theta an observation incentive") {
    CidGraph g = parse_cid(builtin_example("mdp-theta", 2, "D_1"));
    CHECK(single_decision(g) == "D_1");
    CHECK(observation_incentive(g, "Theta"));
    IncentiveReport report = analyze(g);
    CHECK(report.nodes.at("Theta").observation == ObservationStatus::Yes);
}

TEST_CASE("incentive classes are exhaustive on random graphs") {
    for (std::uint64_t seed = 700; seed < 800; ++seed) {
        CidGraph g = random_graph(2 + static_cast<int>(seed % 9), 0.4, seed);
        CidGraph reduced = reduced_graph(g);
        std::string d = single_decision(g);
        for (const auto& n : g.nodes()) {
            if (n.id == d)
                continue;
            InterventionClass cls = intervention_incentive(g, n.id);
            auto desc = relatives(reduced, n.id, Direction::Descendants);
            bool has_path = g.kind(n.id) == NodeKind::Utility;
            for (const auto& t : desc)
                has_path = has_path || reduced.kind(t) == NodeKind::Utility;
            CHECK(has_path == (cls != InterventionClass::None));
        }
    }
}

TEST_CASE("reports round-trip through JSON") {
    IncentiveReport report = analyze(example("obs-vs-int"));
    IncentiveReport again = report_from_json(report_to_json(report));
    CHECK(report == again);
    CHECK_THROWS_AS(report_from_json("{\"graph\": 3}"), CidError);
}

#include "cid/examples.hpp"

#include <sstream>

#include "cid/text_format.hpp"

namespace cid {

namespace {

// Calorie-recommendation example: a step count (and a walking-distance
// estimate derived from it) proxy an unobservable physical activity.
const char* kFitnessObs = R"(cid fitness-obs
node PhysAct chance
node StepCount chance
node EstWalk chance
node D decision
node Fitness utility
edge PhysAct -> Fitness
edge PhysAct -> StepCount
edge D -> Fitness
edge StepCount -> EstWalk
edge StepCount -> D
edge EstWalk -> D
)";

// Same setup extended with the tracker firmware and the estimation formula.
const char* kFitnessInt = R"(cid fitness-int
node PhysAct chance
node StepCount chance
node EstWalk chance
node TrackerFirmware chance
node EstimationFormula chance
node D decision
node Fitness utility
edge PhysAct -> Fitness
edge PhysAct -> StepCount
edge D -> Fitness
edge StepCount -> EstWalk
edge TrackerFirmware -> StepCount
edge EstimationFormula -> EstWalk
edge StepCount -> D
edge EstWalk -> D
)";

// Variant where observation and intervention incentives deviate: the
// firmware is observed, the tracker designer and dirty gym clothes added.
const char* kObsVsInt = R"(cid obs-vs-int
node PhysAct chance
node StepCount chance
node EstWalk chance
node TrackerFirmware chance
node EstimationFormula chance
node TrackerDesigner chance
node DirtyGymClothes chance
node D decision
node Fitness utility
edge PhysAct -> Fitness
edge PhysAct -> StepCount
edge PhysAct -> DirtyGymClothes
edge D -> Fitness
edge StepCount -> EstWalk
edge TrackerFirmware -> StepCount
edge EstimationFormula -> EstWalk
edge TrackerDesigner -> TrackerFirmware
edge StepCount -> D
edge EstWalk -> D
edge TrackerFirmware -> D
)";

// The worked marking-procedure graph.
const char* kMethodGraph = R"(cid method-graph
node X chance
node Y_1 chance
node Y_2 chance
node Z_1 chance
node Z_2 chance
node D decision
node U utility
edge D -> U
edge X -> U
edge X -> Y_2
edge Y_1 -> Y_2
edge Z_1 -> Z_2
edge Z_2 -> U
edge Y_2 -> D
edge Z_2 -> D
)";

// Admissions: the first university only fits the right number of students
// per department, the second covertly optimizes the gender balance.
const char* kFairUnbiased = R"(cid fair-unbiased
node Gender chance
node Department chance
node Admit decision
node Performance utility
node Seats utility label="Right # of students per department"
edge Gender -> Department
edge Department -> Admit
edge Admit -> Performance
edge Admit -> Seats
edge Department -> Seats
)";

const char* kFairBiased = R"(cid fair-biased
node Gender chance
node Department chance
node Admit decision
node Performance utility
node PercentMen utility label="% men"
edge Gender -> Department
edge Department -> Admit
edge Admit -> Performance
edge Admit -> PercentMen
edge Gender -> PercentMen
)";

const char* kQaStandard = R"(cid qa-standard
node Query chance
node Answer decision
node WorldState chance
node Reward utility
edge Query -> Answer
edge Answer -> WorldState
edge Answer -> Reward
edge WorldState -> Reward
edge Query -> Reward
)";

// Counterfactual oracle, read mode: the reward is always 0, so its edges
// are cut.
const char* kQaRead = R"(cid qa-read
node Query chance
node Answer decision
node WorldState chance
node Reward utility
edge Query -> Answer
edge Answer -> WorldState
)";

// Counterfactual oracle, reward mode: the answer is never read, so the edge
// into the world state is cut.
const char* kQaReward = R"(cid qa-reward
node Query chance
node Answer decision
node WorldState chance
node Reward utility
edge Query -> Answer
edge Answer -> Reward
edge WorldState -> Reward
edge Query -> Reward
)";

// MDP with unknown transition function: states S_t, decisions D_t, rewards
// R_t and the latent parameter node Theta, with full-recall information
// links. Horizon = number of decisions.
std::string mdp_theta(int horizon, const std::string& keep_decision) {
    if (horizon < 1 || horizon > 6)
        throw CidError(ErrorCode::BadParams, "mdp-theta horizon must be between 1 and 6");
    std::ostringstream out;
    out << "cid mdp-theta\n";
    out << "node Theta chance\n";
    auto s = [](int t) { return "S_" + std::to_string(t); };
    auto d = [](int t) { return "D_" + std::to_string(t); };
    auto r = [](int t) { return "R_" + std::to_string(t); };
    bool keep_known = keep_decision.empty();
    for (int t = 1; t <= horizon; ++t)
        keep_known = keep_known || keep_decision == d(t);
    if (!keep_known)
        throw CidError(ErrorCode::BadParams,
                       "'" + keep_decision + "' is not a decision of this horizon");
    for (int t = 1; t <= horizon + 1; ++t) {
        out << "node " << s(t) << " chance\n";
        out << "node " << r(t) << " utility\n";
        if (t <= horizon) {
            bool frozen = !keep_decision.empty() && keep_decision != d(t);
            out << "node " << d(t) << (frozen ? " chance" : " decision") << "\n";
        }
    }
    for (int t = 1; t <= horizon + 1; ++t) {
        out << "edge Theta -> " << s(t) << "\n";
        out << "edge " << s(t) << " -> " << r(t) << "\n";
        if (t <= horizon) {
            out << "edge " << s(t) << " -> " << s(t + 1) << "\n";
            out << "edge " << d(t) << " -> " << s(t + 1) << "\n";
            out << "edge " << d(t) << " -> " << r(t + 1) << "\n";
            // Full recall: everything observed so far feeds the decision.
            for (int k = 1; k <= t; ++k) {
                out << "edge " << s(k) << " -> " << d(t) << "\n";
                out << "edge " << r(k) << " -> " << d(t) << "\n";
            }
            for (int k = 1; k < t; ++k)
                out << "edge " << d(k) << " -> " << d(t) << "\n";
        }
    }
    return out.str();
}

} // namespace

const std::vector<std::string>& builtin_example_names() {
    static const std::vector<std::string> names = {
        "fitness-obs", "fitness-int", "obs-vs-int",  "method-graph", "fair-unbiased",
        "fair-biased", "qa-standard", "qa-read",     "qa-reward",    "mdp-theta",
    };
    return names;
}

std::string builtin_example(const std::string& name, int mdp_horizon,
                            const std::string& mdp_keep_decision) {
    if (name == "fitness-obs") return kFitnessObs;
    if (name == "fitness-int") return kFitnessInt;
    if (name == "obs-vs-int") return kObsVsInt;
    if (name == "method-graph") return kMethodGraph;
    if (name == "fair-unbiased") return kFairUnbiased;
    if (name == "fair-biased") return kFairBiased;
    if (name == "qa-standard") return kQaStandard;
    if (name == "qa-read") return kQaRead;
    if (name == "qa-reward") return kQaReward;
    if (name == "mdp-theta") return mdp_theta(mdp_horizon, mdp_keep_decision);
    throw CidError(ErrorCode::UnknownExample, "no built-in example named '" + name + "'");
}

} // namespace cid

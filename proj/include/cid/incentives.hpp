#ifndef CID_INCENTIVES_HPP
#define CID_INCENTIVES_HPP

#include <map>
#include <set>
#include <string>

#include "cid/graph.hpp"

namespace cid {

enum class ObservationStatus { Yes, No, NotApplicable };
enum class InterventionClass { None, Direct, Indirect, Both, NotApplicable };

const char* observation_status_name(ObservationStatus s);   // "yes" | "no" | "n/a"
const char* intervention_class_name(InterventionClass c);   // "none" | ... | "n/a"

struct NodeIncentives {
    ObservationStatus observation = ObservationStatus::NotApplicable;
    ObservationStatus requisite = ObservationStatus::NotApplicable;
    InterventionClass intervention = InterventionClass::NotApplicable;

    bool operator==(const NodeIncentives&) const = default;
};

struct IncentiveReport {
    std::string graph_name;
    std::map<std::string, NodeIncentives> nodes;

    bool operator==(const IncentiveReport&) const = default;
};

// Observation incentive criterion: true iff some utility node descending from
// the decision is d-connected to X given {D} u Pa_D \ {X}. X must not be the
// decision or one of its descendants (NodeDescendsFromDecision); requires
// exactly one decision (NotSingleDecision).
bool observation_incentive(const CidGraph& graph, const std::string& X);

// The requisite observations Pa*_D: decision parents satisfying the
// observation incentive criterion.
std::set<std::string> requisite_observations(const CidGraph& graph);

// Copy of the graph with every nonrequisite information link removed.
CidGraph reduced_graph(const CidGraph& graph);

// Intervention incentive criterion on the reduced graph G*: an incentive
// exists iff a directed path X ~> U exists in G* for some utility U (length 0
// allowed). Direct if some such path avoids D; Indirect if some path passes D
// and the intervention's worth is informational (see implementation notes).
InterventionClass intervention_incentive(const CidGraph& graph, const std::string& X);

// Full per-node classification.
IncentiveReport analyze(const CidGraph& graph);

// Machine-readable report, schema:
// {"graph": <name>, "nodes": {<id>: {"observation": "yes"|"no"|"n/a",
//  "requisite": ..., "intervention": "none"|"direct"|"indirect"|"both"|"n/a"}}}
std::string report_to_json(const IncentiveReport& report);
IncentiveReport report_from_json(const std::string& text);

} // namespace cid

#endif // CID_INCENTIVES_HPP

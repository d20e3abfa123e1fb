#ifndef CID_CONSTRUCT_HPP
#define CID_CONSTRUCT_HPP

#include <string>

#include "cid/graph.hpp"
#include "cid/model.hpp"

namespace cid {

// Executable form of the completeness proof: a parameterization of `graph`
// along a supporting pair for X under which observing X is worth exactly 1
// utility (value_of_information == 1). Fork nodes on the backdoor path are
// fair +-1 coins, colliders multiply their path neighbors, the chosen utility
// multiplies its frontdoor and backdoor predecessors, everything else copies
// its path predecessor or is the constant 0. Throws NotSingleDecision,
// NoIncentive (criterion fails for X), NodeDescendsFromDecision.
CidModel completeness_construction(const CidGraph& graph, const std::string& X);

// Executable form of the intervention completeness proof: a parameterization
// with value_of_control(X) > 0. Three cases: a directed utility path avoiding
// the decision becomes a binary copy chain with X clamped to 0 unless
// intervened; a requisite observation X gets the completeness construction
// with X clamped to 0; an ancestor of a requisite observation O gets the
// completeness construction for O with O's source gated by a copy chain from
// X (O = 0 unless the intervention sets X to 1). Throws NotSingleDecision,
// NoIncentive, IsDecisionNode.
CidModel control_construction(const CidGraph& graph, const std::string& X);

} // namespace cid

#endif // CID_CONSTRUCT_HPP

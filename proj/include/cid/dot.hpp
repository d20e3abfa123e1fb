#ifndef CID_DOT_HPP
#define CID_DOT_HPP

#include <string>

#include "cid/graph.hpp"
#include "cid/incentives.hpp"

namespace cid {

// DOT rendering mirroring the usual CID styling: decision nodes are boxes,
// utility nodes doubleoctagons, chance nodes ellipses; information links are
// dashed. With a report, observation-incentive nodes get color=blue,
// penwidth=2 and intervention classes get fill colors (direct: orange,
// indirect: lightblue, both: orchid). Throws ReportGraphMismatch when the
// report was not produced for this graph.
std::string serialize_dot(const CidGraph& graph, const IncentiveReport* report = nullptr);

} // namespace cid

#endif // CID_DOT_HPP

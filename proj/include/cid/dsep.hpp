#ifndef CID_DSEP_HPP
#define CID_DSEP_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cid/graph.hpp"

namespace cid {

enum class Step { Forward, Backward };

// An undirected path: nodes.size() == steps.size() + 1. steps[i] gives the
// orientation of the edge between nodes[i] and nodes[i+1] (Forward means
// nodes[i] -> nodes[i+1] is a graph edge). Length 0 paths are a single node.
struct UndirectedPath {
    std::vector<std::string> nodes;
    std::vector<Step> steps;

    int length() const { return static_cast<int>(steps.size()); }
    bool fully_directed() const {
        for (Step s : steps)
            if (s == Step::Backward)
                return false;
        return true;
    }
};

// True iff every undirected path between X and Y is blocked by Z under the
// chain/fork/collider rules. Linear-time reachability over (node, direction)
// states; paths of length 0 and 1 are always active. X and Y must be disjoint
// (OverlappingSets); all ids must exist (UnknownNode).
bool d_separated(const CidGraph& graph, const std::set<std::string>& X,
                 const std::set<std::string>& Y, const std::set<std::string>& Z);

// A frontdoor directed path D ~> U plus a backdoor path X ~> U that is active
// when conditioning on {D} u Pa_D \ {X} and does not pass D. Both end at the
// same utility node; merge_node is where they meet (here always U itself).
struct SupportingPair {
    UndirectedPath frontdoor;
    UndirectedPath backdoor;
    std::string merge_node;
};

// Shortest backdoor path (ties broken by lexicographic node-id sequence),
// found by breadth-first search over partial paths. Throws NotSingleDecision,
// NoIncentive (the observation incentive criterion fails for X).
SupportingPair find_supporting_pair(const CidGraph& graph, const std::string& X);

namespace detail {

// Explicit search for the shortest active simple path (lexicographic
// tie-break). Exponential in the worst case; only used on small graphs.
struct PathQuery {
    const CidGraph* graph = nullptr;
    int start = -1;
    std::vector<bool> target;      // accepting end nodes
    std::vector<bool> conditioned; // Z
    std::vector<bool> collider_ok; // Z together with its ancestors
    std::vector<bool> forbidden;   // nodes the path may not touch at all
    bool require_nondirected = false; // reject fully-forward results
    bool forward_only = false;        // directed-path search
};

std::optional<UndirectedPath> shortest_active_path(const PathQuery& query);

// Activeness check for an explicit path (interior nodes only).
bool path_is_active(const CidGraph& graph, const UndirectedPath& path,
                    const std::set<std::string>& Z);

} // namespace detail

} // namespace cid

#endif // CID_DSEP_HPP

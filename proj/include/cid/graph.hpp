#ifndef CID_GRAPH_HPP
#define CID_GRAPH_HPP

#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cid/errors.hpp"

namespace cid {

enum class NodeKind { Chance, Decision, Utility };

const char* node_kind_name(NodeKind kind);
NodeKind node_kind_from_name(const std::string& name); // throws SyntaxError

// A causal influence diagram graph: a DAG whose nodes are chance, decision or
// utility variables. Information links are exactly the edges whose destination
// is a decision node; they carry no separate representation.
class CidGraph {
public:
    struct Node {
        std::string id;
        NodeKind kind = NodeKind::Chance;
        std::string label; // empty = no label
    };

    CidGraph() = default;
    explicit CidGraph(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    // Throws DuplicateNode. The id grammar is checked by validate()/parse_cid.
    void add_node(const std::string& id, NodeKind kind, const std::string& label = "");
    // Throws UnknownNodeInEdge, SelfLoop, DuplicateEdge. Cycles are allowed
    // here and reported by validate().
    void add_edge(const std::string& src, const std::string& dst);
    void remove_edge(const std::string& src, const std::string& dst);

    bool has_node(const std::string& id) const { return index_.count(id) != 0; }
    bool has_edge(const std::string& src, const std::string& dst) const;
    int index_of(const std::string& id) const; // throws UnknownNode
    const Node& node(const std::string& id) const { return nodes_[index_of(id)]; }
    const Node& node_at(int index) const { return nodes_[index]; }
    NodeKind kind(const std::string& id) const { return node(id).kind; }
    void set_kind(const std::string& id, NodeKind kind);

    int node_count() const { return static_cast<int>(nodes_.size()); }
    const std::vector<Node>& nodes() const { return nodes_; }
    // Edges in declaration order, as id pairs.
    std::vector<std::pair<std::string, std::string>> edges() const;
    int edge_count() const { return static_cast<int>(edges_.size()); }

    // Parents/children in edge declaration order.
    std::vector<std::string> parents(const std::string& id) const;
    std::vector<std::string> children(const std::string& id) const;
    const std::vector<int>& parent_indices(int index) const { return parents_[index]; }
    const std::vector<int>& child_indices(int index) const { return children_[index]; }

    std::vector<std::string> decision_nodes() const;
    std::vector<std::string> utility_nodes() const;

    bool is_acyclic() const;
    // Deterministic topological order (smallest declaration index first).
    // Throws CycleDetected.
    std::vector<int> topological_order() const;

private:
    std::string name_;
    std::vector<Node> nodes_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
    std::vector<std::pair<int, int>> edges_;
    std::set<std::pair<int, int>> edge_set_;
};

struct ValidationIssue {
    std::string code;
    std::string message;
    std::string subject; // node id or "src->dst"
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;
};

// Structural validation: id grammar, acyclicity, at least one utility node.
// A decision-node count != 1 is a warning, not an error.
ValidationReport validate(const CidGraph& graph);

bool is_valid_node_id(const std::string& id);

enum class Direction { Ancestors, Descendants };

// Strict ancestors/descendants (directed reachability, length >= 1).
std::set<std::string> relatives(const CidGraph& graph, const std::string& node, Direction direction);

// Index-based reachability helpers shared across the library.
std::vector<bool> descendant_mask(const CidGraph& graph, int node);
std::vector<bool> ancestor_mask(const CidGraph& graph, int node);

// The unique decision node. Throws NotSingleDecision.
std::string single_decision(const CidGraph& graph);

} // namespace cid

#endif // CID_GRAPH_HPP

#include "cid/graph.hpp"

#include <algorithm>
#include <queue>

namespace cid {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::UnknownNodeInEdge: return "UnknownNodeInEdge";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::OverlappingSets: return "OverlappingSets";
    case ErrorCode::NotSingleDecision: return "NotSingleDecision";
    case ErrorCode::NodeDescendsFromDecision: return "NodeDescendsFromDecision";
    case ErrorCode::IsDecisionNode: return "IsDecisionNode";
    case ErrorCode::NoIncentive: return "NoIncentive";
    case ErrorCode::ReportGraphMismatch: return "ReportGraphMismatch";
    case ErrorCode::MissingCpt: return "MissingCpt";
    case ErrorCode::RowNotNormalized: return "RowNotNormalized";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::NonNumericUtilityDomain: return "NonNumericUtilityDomain";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::EditCreatesCycle: return "EditCreatesCycle";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::InvalidModel: return "InvalidModel";
    }
    return "Unknown";
}

std::string CidError::format(ErrorCode code, const std::string& message, int line, int column) {
    std::string out = error_code_name(code);
    out += ": ";
    out += message;
    if (line > 0) {
        out += " (line " + std::to_string(line);
        if (column > 0)
            out += ", column " + std::to_string(column);
        out += ")";
    }
    return out;
}

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
    case NodeKind::Chance: return "chance";
    case NodeKind::Decision: return "decision";
    case NodeKind::Utility: return "utility";
    }
    return "chance";
}

NodeKind node_kind_from_name(const std::string& name) {
    if (name == "chance") return NodeKind::Chance;
    if (name == "decision") return NodeKind::Decision;
    if (name == "utility") return NodeKind::Utility;
    throw CidError(ErrorCode::SyntaxError, "unknown node kind '" + name + "'");
}

void CidGraph::add_node(const std::string& id, NodeKind kind, const std::string& label) {
    if (index_.count(id))
        throw CidError(ErrorCode::DuplicateNode, "node '" + id + "' declared twice");
    index_[id] = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{id, kind, label});
    parents_.emplace_back();
    children_.emplace_back();
}

void CidGraph::add_edge(const std::string& src, const std::string& dst) {
    auto si = index_.find(src);
    auto di = index_.find(dst);
    if (si == index_.end())
        throw CidError(ErrorCode::UnknownNodeInEdge, "edge references undeclared node '" + src + "'");
    if (di == index_.end())
        throw CidError(ErrorCode::UnknownNodeInEdge, "edge references undeclared node '" + dst + "'");
    if (si->second == di->second)
        throw CidError(ErrorCode::SelfLoop, "self-loop on node '" + src + "'");
    auto key = std::make_pair(si->second, di->second);
    if (edge_set_.count(key))
        throw CidError(ErrorCode::DuplicateEdge, "duplicate edge " + src + " -> " + dst);
    edge_set_.insert(key);
    edges_.push_back(key);
    children_[si->second].push_back(di->second);
    parents_[di->second].push_back(si->second);
}

void CidGraph::remove_edge(const std::string& src, const std::string& dst) {
    int s = index_of(src);
    int d = index_of(dst);
    auto key = std::make_pair(s, d);
    if (!edge_set_.count(key))
        throw CidError(ErrorCode::UnknownNodeInEdge, "no edge " + src + " -> " + dst);
    edge_set_.erase(key);
    edges_.erase(std::find(edges_.begin(), edges_.end(), key));
    auto& ch = children_[s];
    ch.erase(std::find(ch.begin(), ch.end(), d));
    auto& pa = parents_[d];
    pa.erase(std::find(pa.begin(), pa.end(), s));
}

bool CidGraph::has_edge(const std::string& src, const std::string& dst) const {
    auto si = index_.find(src);
    auto di = index_.find(dst);
    if (si == index_.end() || di == index_.end())
        return false;
    return edge_set_.count({si->second, di->second}) != 0;
}

int CidGraph::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw CidError(ErrorCode::UnknownNode, "unknown node '" + id + "'");
    return it->second;
}

void CidGraph::set_kind(const std::string& id, NodeKind kind) {
    nodes_[index_of(id)].kind = kind;
}

std::vector<std::pair<std::string, std::string>> CidGraph::edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(edges_.size());
    for (auto [s, d] : edges_)
        out.emplace_back(nodes_[s].id, nodes_[d].id);
    return out;
}

std::vector<std::string> CidGraph::parents(const std::string& id) const {
    std::vector<std::string> out;
    for (int p : parents_[index_of(id)])
        out.push_back(nodes_[p].id);
    return out;
}

std::vector<std::string> CidGraph::children(const std::string& id) const {
    std::vector<std::string> out;
    for (int c : children_[index_of(id)])
        out.push_back(nodes_[c].id);
    return out;
}

std::vector<std::string> CidGraph::decision_nodes() const {
    std::vector<std::string> out;
    for (const auto& n : nodes_)
        if (n.kind == NodeKind::Decision)
            out.push_back(n.id);
    return out;
}

std::vector<std::string> CidGraph::utility_nodes() const {
    std::vector<std::string> out;
    for (const auto& n : nodes_)
        if (n.kind == NodeKind::Utility)
            out.push_back(n.id);
    return out;
}

bool CidGraph::is_acyclic() const {
    try {
        topological_order();
        return true;
    } catch (const CidError&) {
        return false;
    }
}

std::vector<int> CidGraph::topological_order() const {
    int n = node_count();
    std::vector<int> indegree(n, 0);
    for (auto [s, d] : edges_) {
        (void)s;
        ++indegree[d];
    }
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int i = 0; i < n; ++i)
        if (indegree[i] == 0)
            ready.push(i);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : children_[v])
            if (--indegree[c] == 0)
                ready.push(c);
    }
    if (static_cast<int>(order.size()) != n)
        throw CidError(ErrorCode::CycleDetected, "graph contains a directed cycle");
    return order;
}

bool is_valid_node_id(const std::string& id) {
    if (id.empty())
        return false;
    auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto tail = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    if (!head(id[0]))
        return false;
    for (size_t i = 1; i < id.size(); ++i)
        if (!tail(id[i]))
            return false;
    return true;
}

ValidationReport validate(const CidGraph& graph) {
    ValidationReport report;
    auto error = [&](const std::string& code, const std::string& msg, const std::string& subject) {
        report.errors.push_back({code, msg, subject});
    };
    for (const auto& n : graph.nodes())
        if (!is_valid_node_id(n.id))
            error("BadNodeId", "node id does not match [A-Za-z_][A-Za-z0-9_]*", n.id);
    if (!graph.is_acyclic())
        error("CycleDetected", "graph contains a directed cycle", "");
    if (graph.utility_nodes().empty())
        error("NoUtility", "graph has no utility node", "");
    size_t decisions = graph.decision_nodes().size();
    if (decisions == 0)
        report.warnings.push_back({"NoDecision", "graph has no decision node; incentive operations will fail", ""});
    else if (decisions > 1)
        report.warnings.push_back({"MultiDecision", "graph has more than one decision node; incentive operations will fail", ""});
    report.ok = report.errors.empty();
    return report;
}

std::vector<bool> descendant_mask(const CidGraph& graph, int node) {
    std::vector<bool> mask(graph.node_count(), false);
    std::vector<int> stack{node};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int c : graph.child_indices(v)) {
            if (!mask[c]) {
                mask[c] = true;
                stack.push_back(c);
            }
        }
    }
    return mask;
}

std::vector<bool> ancestor_mask(const CidGraph& graph, int node) {
    std::vector<bool> mask(graph.node_count(), false);
    std::vector<int> stack{node};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int p : graph.parent_indices(v)) {
            if (!mask[p]) {
                mask[p] = true;
                stack.push_back(p);
            }
        }
    }
    return mask;
}

std::set<std::string> relatives(const CidGraph& graph, const std::string& node, Direction direction) {
    int start = graph.index_of(node);
    auto mask = direction == Direction::Descendants ? descendant_mask(graph, start)
                                                    : ancestor_mask(graph, start);
    std::set<std::string> out;
    for (int i = 0; i < graph.node_count(); ++i)
        if (mask[i])
            out.insert(graph.node_at(i).id);
    return out;
}

std::string single_decision(const CidGraph& graph) {
    auto decisions = graph.decision_nodes();
    if (decisions.size() != 1)
        throw CidError(ErrorCode::NotSingleDecision,
                       "operation requires exactly one decision node, graph has " +
                           std::to_string(decisions.size()));
    return decisions.front();
}

} // namespace cid

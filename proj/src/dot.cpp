#include "cid/dot.hpp"

#include <sstream>

namespace cid {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

const char* shape_for(NodeKind kind) {
    switch (kind) {
    case NodeKind::Decision: return "box";
    case NodeKind::Utility: return "doubleoctagon";
    case NodeKind::Chance: return "ellipse";
    }
    return "ellipse";
}

} // namespace

std::string serialize_dot(const CidGraph& graph, const IncentiveReport* report) {
    if (report) {
        bool mismatch = report->nodes.size() != static_cast<size_t>(graph.node_count());
        if (!mismatch)
            for (const auto& n : graph.nodes())
                if (!report->nodes.count(n.id)) {
                    mismatch = true;
                    break;
                }
        if (mismatch)
            throw CidError(ErrorCode::ReportGraphMismatch,
                           "incentive report does not cover this graph's nodes");
    }

    std::ostringstream out;
    out << "digraph " << quote(graph.name().empty() ? "g" : graph.name()) << " {\n";
    for (const auto& n : graph.nodes()) {
        out << "  " << n.id << " [shape=" << shape_for(n.kind);
        if (!n.label.empty())
            out << ", label=" << quote(n.label);
        if (report) {
            const NodeIncentives& cell = report->nodes.at(n.id);
            if (cell.observation == ObservationStatus::Yes)
                out << ", color=blue, penwidth=2";
            switch (cell.intervention) {
            case InterventionClass::Direct:
                out << ", fillcolor=orange, style=filled";
                break;
            case InterventionClass::Indirect:
                out << ", fillcolor=lightblue, style=filled";
                break;
            case InterventionClass::Both:
                out << ", fillcolor=orchid, style=filled";
                break;
            default:
                break;
            }
        }
        out << "];\n";
    }
    for (const auto& [src, dst] : graph.edges()) {
        out << "  " << src << " -> " << dst;
        if (graph.kind(dst) == NodeKind::Decision)
            out << " [style=dashed]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace cid

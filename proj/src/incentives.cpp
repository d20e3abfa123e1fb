#include "cid/incentives.hpp"

#include <cassert>

#include <nlohmann/json.hpp>

#include "cid/dsep.hpp"

namespace cid {

namespace {

using nlohmann::json;

// Utility nodes with a directed path of length >= 1 from the decision.
std::set<std::string> influenceable_utilities(const CidGraph& graph, const std::string& decision) {
    auto desc = descendant_mask(graph, graph.index_of(decision));
    std::set<std::string> out;
    for (int i = 0; i < graph.node_count(); ++i)
        if (desc[i] && graph.node_at(i).kind == NodeKind::Utility)
            out.insert(graph.node_at(i).id);
    return out;
}

// Reachability from `start` over directed edges, optionally skipping one node.
std::vector<bool> directed_reach(const CidGraph& graph, int start, int skip = -1) {
    std::vector<bool> mask(graph.node_count(), false);
    if (start == skip)
        return mask;
    std::vector<int> stack{start};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int c : graph.child_indices(v)) {
            if (c == skip || mask[c])
                continue;
            mask[c] = true;
            stack.push_back(c);
        }
    }
    return mask;
}

InterventionClass classify_intervention(const CidGraph& reduced, const std::string& decision,
                                        const std::string& X) {
    const int n = reduced.node_count();
    const int x = reduced.index_of(X);
    const int d = reduced.index_of(decision);

    // Directed paths X ~> utility that avoid D (length 0 counts: a utility
    // node trivially carries an incentive).
    auto reach_avoiding = directed_reach(reduced, x, d);
    bool direct = reduced.node_at(x).kind == NodeKind::Utility;
    for (int i = 0; i < n && !direct; ++i)
        direct = reach_avoiding[i] && reduced.node_at(i).kind == NodeKind::Utility;

    // Directed paths X ~> utility through D.
    auto reach = directed_reach(reduced, x);
    bool through = false;
    if (reach[d]) {
        auto desc_d = descendant_mask(reduced, d);
        for (int i = 0; i < n && !through; ++i)
            through = desc_d[i] && reduced.node_at(i).kind == NodeKind::Utility;
    }

    if (!direct && !through)
        return InterventionClass::None;
    if (!through)
        return InterventionClass::Direct;

    // A second, non-directed path X ~> utility active given Pa_D u {D} in the
    // reduced graph marks the incentive as informational. When no D-avoiding
    // directed path exists at all, the incentive can only be informational
    // (the intervention pays off solely through a better informed decision),
    // so the class is Indirect even when that path search comes up empty.
    std::vector<bool> z_mask(n, false);
    z_mask[d] = true;
    for (const auto& p : reduced.parents(decision))
        z_mask[reduced.index_of(p)] = true;
    std::vector<bool> anc_or_z = z_mask;
    {
        std::vector<int> stack;
        for (int i = 0; i < n; ++i)
            if (z_mask[i])
                stack.push_back(i);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int p : reduced.parent_indices(v))
                if (!anc_or_z[p]) {
                    anc_or_z[p] = true;
                    stack.push_back(p);
                }
        }
    }
    detail::PathQuery query;
    query.graph = &reduced;
    query.start = x;
    query.target.assign(n, false);
    for (int i = 0; i < n; ++i)
        if (reduced.node_at(i).kind == NodeKind::Utility)
            query.target[i] = true;
    query.conditioned = z_mask;
    query.collider_ok = anc_or_z;
    query.forbidden.assign(n, false);
    query.require_nondirected = true;
    bool second = detail::shortest_active_path(query).has_value();

    InterventionClass result;
    if (!direct)
        result = InterventionClass::Indirect;
    else if (second)
        result = InterventionClass::Both;
    else
        result = InterventionClass::Direct;

    // The paper's exhaustiveness claim: an incentive is always direct or
    // indirect (or both).
    assert(result != InterventionClass::None);
    return result;
}

} // namespace

const char* observation_status_name(ObservationStatus s) {
    switch (s) {
    case ObservationStatus::Yes: return "yes";
    case ObservationStatus::No: return "no";
    case ObservationStatus::NotApplicable: return "n/a";
    }
    return "n/a";
}

const char* intervention_class_name(InterventionClass c) {
    switch (c) {
    case InterventionClass::None: return "none";
    case InterventionClass::Direct: return "direct";
    case InterventionClass::Indirect: return "indirect";
    case InterventionClass::Both: return "both";
    case InterventionClass::NotApplicable: return "n/a";
    }
    return "n/a";
}

bool observation_incentive(const CidGraph& graph, const std::string& X) {
    const std::string decision = single_decision(graph);
    const int x = graph.index_of(X);
    const int d = graph.index_of(decision);
    if (x == d || descendant_mask(graph, d)[x])
        throw CidError(ErrorCode::NodeDescendsFromDecision,
                       "observation incentive is undefined for '" + X +
                           "': it is the decision or descends from it");
    auto utilities = influenceable_utilities(graph, decision);
    if (utilities.empty())
        return false;
    std::set<std::string> Z{decision};
    for (const auto& p : graph.parents(decision))
        if (p != X)
            Z.insert(p);
    return !d_separated(graph, {X}, utilities, Z);
}

std::set<std::string> requisite_observations(const CidGraph& graph) {
    const std::string decision = single_decision(graph);
    std::set<std::string> out;
    for (const auto& p : graph.parents(decision))
        if (observation_incentive(graph, p))
            out.insert(p);
    return out;
}

CidGraph reduced_graph(const CidGraph& graph) {
    const std::string decision = single_decision(graph);
    auto requisite = requisite_observations(graph);
    CidGraph out(graph.name());
    for (const auto& n : graph.nodes())
        out.add_node(n.id, n.kind, n.label);
    for (const auto& [s, d] : graph.edges()) {
        if (d == decision && !requisite.count(s))
            continue;
        out.add_edge(s, d);
    }
    return out;
}

InterventionClass intervention_incentive(const CidGraph& graph, const std::string& X) {
    const std::string decision = single_decision(graph);
    graph.index_of(X);
    if (X == decision)
        throw CidError(ErrorCode::IsDecisionNode,
                       "intervention incentive is undefined for the decision node");
    return classify_intervention(reduced_graph(graph), decision, X);
}

IncentiveReport analyze(const CidGraph& graph) {
    const std::string decision = single_decision(graph);
    const int d = graph.index_of(decision);
    auto desc_d = descendant_mask(graph, d);
    auto requisite = requisite_observations(graph);
    std::set<std::string> parents;
    for (const auto& p : graph.parents(decision))
        parents.insert(p);
    CidGraph reduced = reduced_graph(graph);

    IncentiveReport report;
    report.graph_name = graph.name();
    for (const auto& n : graph.nodes()) {
        NodeIncentives cell;
        bool is_decision = n.id == decision;
        if (is_decision || desc_d[graph.index_of(n.id)]) {
            cell.observation = ObservationStatus::NotApplicable;
        } else {
            cell.observation = observation_incentive(graph, n.id) ? ObservationStatus::Yes
                                                                  : ObservationStatus::No;
        }
        if (parents.count(n.id)) {
            cell.requisite = requisite.count(n.id) ? ObservationStatus::Yes : ObservationStatus::No;
        } else {
            cell.requisite = ObservationStatus::NotApplicable;
        }
        cell.intervention = is_decision ? InterventionClass::NotApplicable
                                        : classify_intervention(reduced, decision, n.id);
        report.nodes[n.id] = cell;
    }
    return report;
}

std::string report_to_json(const IncentiveReport& report) {
    json nodes = json::object();
    for (const auto& [id, cell] : report.nodes) {
        nodes[id] = {
            {"observation", observation_status_name(cell.observation)},
            {"requisite", observation_status_name(cell.requisite)},
            {"intervention", intervention_class_name(cell.intervention)},
        };
    }
    json out = {{"graph", report.graph_name}, {"nodes", nodes}};
    return out.dump(2) + "\n";
}

IncentiveReport report_from_json(const std::string& text) {
    json parsed;
    try {
        parsed = json::parse(text);
    } catch (const json::parse_error& e) {
        throw CidError(ErrorCode::SyntaxError, std::string("bad report JSON: ") + e.what());
    }
    auto obs_from = [](const std::string& s) {
        if (s == "yes") return ObservationStatus::Yes;
        if (s == "no") return ObservationStatus::No;
        if (s == "n/a") return ObservationStatus::NotApplicable;
        throw CidError(ErrorCode::SyntaxError, "bad observation status '" + s + "'");
    };
    auto int_from = [](const std::string& s) {
        if (s == "none") return InterventionClass::None;
        if (s == "direct") return InterventionClass::Direct;
        if (s == "indirect") return InterventionClass::Indirect;
        if (s == "both") return InterventionClass::Both;
        if (s == "n/a") return InterventionClass::NotApplicable;
        throw CidError(ErrorCode::SyntaxError, "bad intervention class '" + s + "'");
    };
    IncentiveReport report;
    try {
        report.graph_name = parsed.at("graph").get<std::string>();
        for (const auto& [id, cell] : parsed.at("nodes").items()) {
            NodeIncentives out;
            out.observation = obs_from(cell.at("observation").get<std::string>());
            out.requisite = obs_from(cell.at("requisite").get<std::string>());
            out.intervention = int_from(cell.at("intervention").get<std::string>());
            report.nodes[id] = out;
        }
    } catch (const json::exception& e) {
        throw CidError(ErrorCode::SyntaxError, std::string("bad report JSON: ") + e.what());
    }
    return report;
}

} // namespace cid

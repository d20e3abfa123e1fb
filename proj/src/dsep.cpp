#include "cid/dsep.hpp"

#include <algorithm>
#include <array>
#include <deque>

#include "cid/incentives.hpp"

namespace cid {

namespace {

// Z together with all ancestors of Z: exactly the nodes v with
// desc*(v) n Z != 0 (a collider counts as its own descendant).
std::vector<bool> z_or_ancestor_of_z(const CidGraph& graph, const std::vector<bool>& z) {
    std::vector<bool> mask = z;
    std::vector<int> stack;
    for (int i = 0; i < graph.node_count(); ++i)
        if (z[i])
            stack.push_back(i);
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

std::vector<bool> mask_of(const CidGraph& graph, const std::set<std::string>& ids) {
    std::vector<bool> mask(graph.node_count(), false);
    for (const auto& id : ids)
        mask[graph.index_of(id)] = true;
    return mask;
}

} // namespace

bool d_separated(const CidGraph& graph, const std::set<std::string>& X,
                 const std::set<std::string>& Y, const std::set<std::string>& Z) {
    for (const auto& id : X)
        if (Y.count(id))
            throw CidError(ErrorCode::OverlappingSets,
                           "query sets overlap on node '" + id + "'");
    auto x_mask = mask_of(graph, X);
    auto y_mask = mask_of(graph, Y);
    auto z_mask = mask_of(graph, Z);
    auto collider_ok = z_or_ancestor_of_z(graph, z_mask);

    const int n = graph.node_count();
    // State (v, how we arrived): 0 = from a parent (with the arrow),
    // 1 = from a child (against the arrow).
    std::vector<std::array<bool, 2>> seen(n, {false, false});
    std::deque<std::pair<int, int>> queue;
    auto visit = [&](int v, int dir) -> bool {
        if (seen[v][dir])
            return false;
        seen[v][dir] = true;
        queue.emplace_back(v, dir);
        return y_mask[v];
    };

    for (const auto& id : X) {
        int x = graph.index_of(id);
        for (int c : graph.child_indices(x))
            if (visit(c, 0))
                return false;
        for (int p : graph.parent_indices(x))
            if (visit(p, 1))
                return false;
    }

    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        if (dir == 0) {
            // Arrived along an edge into v: may continue as a chain (down) if
            // v is unobserved, or bounce back up if v is an active collider.
            if (!z_mask[v]) {
                for (int c : graph.child_indices(v))
                    if (visit(c, 0))
                        return false;
            }
            if (collider_ok[v]) {
                for (int p : graph.parent_indices(v))
                    if (visit(p, 1))
                        return false;
            }
        } else {
            // Arrived against an edge: fork or chain, both need v unobserved.
            if (!z_mask[v]) {
                for (int c : graph.child_indices(v))
                    if (visit(c, 0))
                        return false;
                for (int p : graph.parent_indices(v))
                    if (visit(p, 1))
                        return false;
            }
        }
    }
    return true;
}

namespace detail {

bool path_is_active(const CidGraph& graph, const UndirectedPath& path,
                    const std::set<std::string>& Z) {
    if (path.length() <= 1)
        return true;
    auto z_mask = mask_of(graph, Z);
    auto collider_ok = z_or_ancestor_of_z(graph, z_mask);
    for (int i = 1; i < static_cast<int>(path.nodes.size()) - 1; ++i) {
        int v = graph.index_of(path.nodes[i]);
        bool in_fwd = path.steps[i - 1] == Step::Forward;
        bool out_fwd = path.steps[i] == Step::Forward;
        bool collider = in_fwd && !out_fwd;
        if (collider) {
            if (!collider_ok[v])
                return false;
        } else {
            if (z_mask[v])
                return false;
        }
    }
    return true;
}

std::optional<UndirectedPath> shortest_active_path(const PathQuery& query) {
    const CidGraph& graph = *query.graph;
    const int n = graph.node_count();

    // Neighbors sorted by id so breadth-first expansion is lexicographic.
    struct Hop {
        int node;
        Step step;
    };
    std::vector<std::vector<Hop>> hops(n);
    for (int v = 0; v < n; ++v) {
        for (int c : graph.child_indices(v))
            hops[v].push_back({c, Step::Forward});
        if (!query.forward_only)
            for (int p : graph.parent_indices(v))
                hops[v].push_back({p, Step::Backward});
        std::sort(hops[v].begin(), hops[v].end(), [&](const Hop& a, const Hop& b) {
            return graph.node_at(a.node).id < graph.node_at(b.node).id;
        });
    }

    struct Partial {
        std::vector<int> nodes;
        std::vector<Step> steps;
        std::vector<bool> on_path;
        bool has_backward = false;
    };

    auto as_path = [&](const Partial& p) {
        UndirectedPath out;
        for (int v : p.nodes)
            out.nodes.push_back(graph.node_at(v).id);
        out.steps = p.steps;
        return out;
    };

    Partial root;
    root.nodes.push_back(query.start);
    root.on_path.assign(n, false);
    root.on_path[query.start] = true;

    std::vector<Partial> level{std::move(root)};
    while (!level.empty()) {
        std::vector<Partial> next;
        for (const auto& partial : level) {
            int v = partial.nodes.back();
            for (const Hop& hop : hops[v]) {
                if (partial.on_path[hop.node] || query.forbidden[hop.node])
                    continue;
                // Completing a triple at v: check its pattern.
                if (!partial.steps.empty()) {
                    bool in_fwd = partial.steps.back() == Step::Forward;
                    bool out_fwd = hop.step == Step::Forward;
                    bool collider = in_fwd && !out_fwd;
                    if (collider) {
                        if (!query.collider_ok[v])
                            continue;
                    } else if (query.conditioned[v]) {
                        continue;
                    }
                }
                Partial ext = partial;
                ext.nodes.push_back(hop.node);
                ext.steps.push_back(hop.step);
                ext.on_path[hop.node] = true;
                ext.has_backward = partial.has_backward || hop.step == Step::Backward;
                if (query.target[hop.node] &&
                    (!query.require_nondirected || ext.has_backward))
                    return as_path(ext);
                next.push_back(std::move(ext));
            }
        }
        level = std::move(next);
    }
    return std::nullopt;
}

} // namespace detail

SupportingPair find_supporting_pair(const CidGraph& graph, const std::string& X) {
    const std::string decision = single_decision(graph);
    if (!observation_incentive(graph, X))
        throw CidError(ErrorCode::NoIncentive,
                       "node '" + X + "' does not satisfy the observation incentive criterion");

    const int n = graph.node_count();
    const int d = graph.index_of(decision);
    const int x = graph.index_of(X);

    auto desc_d = descendant_mask(graph, d);
    std::vector<bool> influenceable(n, false);
    for (int i = 0; i < n; ++i)
        influenceable[i] = desc_d[i] && graph.node_at(i).kind == NodeKind::Utility;

    std::set<std::string> Z{decision};
    for (const auto& p : graph.parents(decision))
        if (p != X)
            Z.insert(p);
    std::vector<bool> z_mask(n, false);
    for (const auto& id : Z)
        z_mask[graph.index_of(id)] = true;

    detail::PathQuery backdoor_query;
    backdoor_query.graph = &graph;
    backdoor_query.start = x;
    backdoor_query.target = influenceable;
    backdoor_query.conditioned = z_mask;
    backdoor_query.collider_ok = z_or_ancestor_of_z(graph, z_mask);
    backdoor_query.forbidden.assign(n, false);
    backdoor_query.forbidden[d] = true;

    auto backdoor = detail::shortest_active_path(backdoor_query);
    if (!backdoor)
        throw CidError(ErrorCode::NoIncentive,
                       "no active backdoor path from '" + X + "' to an influenceable utility");
    // Any active path into a utility descending from D arrives with the arrow;
    // a backward arrival would need a collider inside desc(D) activated by an
    // ancestor of D, which the acyclicity of the graph rules out.
    if (backdoor->steps.back() != Step::Forward)
        throw CidError(ErrorCode::InvalidModel, "backdoor path arrives against the arrow");

    const std::string& utility = backdoor->nodes.back();
    detail::PathQuery frontdoor_query;
    frontdoor_query.graph = &graph;
    frontdoor_query.start = d;
    frontdoor_query.target.assign(n, false);
    frontdoor_query.target[graph.index_of(utility)] = true;
    frontdoor_query.conditioned.assign(n, false);
    frontdoor_query.collider_ok.assign(n, false);
    frontdoor_query.forbidden.assign(n, false);
    frontdoor_query.forward_only = true;
    auto frontdoor = detail::shortest_active_path(frontdoor_query);
    if (!frontdoor)
        throw CidError(ErrorCode::InvalidModel,
                       "no directed path from the decision to utility '" + utility + "'");

    if (!detail::path_is_active(graph, *backdoor, Z))
        throw CidError(ErrorCode::InvalidModel, "backdoor path failed re-verification");

    SupportingPair pair;
    pair.frontdoor = std::move(*frontdoor);
    pair.backdoor = std::move(*backdoor);
    pair.merge_node = utility;
    return pair;
}

} // namespace cid

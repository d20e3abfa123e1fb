#include "cid/random_gen.hpp"

#include <algorithm>
#include <numeric>

namespace cid {

CidGraph random_graph(int node_count, double edge_probability, std::uint64_t seed) {
    if (node_count < 2 || node_count > 10)
        throw CidError(ErrorCode::BadParams, "node count must be between 2 and 10");
    if (!(edge_probability >= 0.0 && edge_probability <= 1.0))
        throw CidError(ErrorCode::BadParams, "edge probability must be in [0, 1]");

    SplitMix64 rng(seed);
    CidGraph g("random_" + std::to_string(seed));
    for (int i = 0; i < node_count; ++i)
        g.add_node("N" + std::to_string(i + 1), NodeKind::Chance);

    // Fisher-Yates for the topological order.
    std::vector<int> order(node_count);
    std::iota(order.begin(), order.end(), 0);
    for (int i = node_count - 1; i > 0; --i)
        std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);

    // positive_unit is in (0, 1], so p = 0 keeps nothing and p = 1 everything.
    for (int i = 0; i < node_count; ++i)
        for (int j = i + 1; j < node_count; ++j)
            if (rng.positive_unit() <= edge_probability)
                g.add_edge(g.node_at(order[i]).id, g.node_at(order[j]).id);

    std::vector<std::string> non_sinks;
    for (const auto& n : g.nodes())
        if (!g.children(n.id).empty())
            non_sinks.push_back(n.id);
    std::string decision = non_sinks.empty()
                               ? g.node_at(static_cast<int>(rng.below(node_count))).id
                               : non_sinks[rng.below(non_sinks.size())];
    g.set_kind(decision, NodeKind::Decision);

    auto descendants = relatives(g, decision, Direction::Descendants);
    std::string utility;
    if (!descendants.empty()) {
        std::vector<std::string> pool(descendants.begin(), descendants.end());
        utility = pool[rng.below(pool.size())];
    } else {
        std::vector<std::string> sinks;
        for (const auto& n : g.nodes())
            if (n.id != decision && g.children(n.id).empty())
                sinks.push_back(n.id);
        if (sinks.empty())
            for (const auto& n : g.nodes())
                if (n.id != decision)
                    sinks.push_back(n.id);
        utility = sinks[rng.below(sinks.size())];
    }
    g.set_kind(utility, NodeKind::Utility);
    return g;
}

CidModel random_model(const CidGraph& graph, int domain_size, std::uint64_t seed) {
    if (domain_size < 2 || domain_size > 4)
        throw CidError(ErrorCode::BadParams, "domain size must be between 2 and 4");

    SplitMix64 rng(seed);
    CidModel model;
    model.graph = graph;
    for (const auto& n : graph.nodes()) {
        Domain dom;
        for (int v = 0; v < domain_size; ++v) {
            if (n.kind == NodeKind::Utility)
                dom.values.push_back(Value::from_number(v));
            else
                dom.values.push_back(Value::from_token("v" + std::to_string(v)));
        }
        model.domains[n.id] = std::move(dom);
    }
    for (const auto& n : graph.nodes()) {
        if (n.kind == NodeKind::Decision)
            continue;
        Cpt cpt;
        cpt.owner = n.id;
        cpt.parent_order = graph.parents(n.id);
        long long rows = 1;
        for (const auto& p : cpt.parent_order)
            rows *= model.domains.at(p).size();
        for (long long r = 0; r < rows; ++r) {
            std::vector<double> row(domain_size);
            double sum = 0.0;
            for (double& v : row) {
                v = rng.positive_unit();
                sum += v;
            }
            for (double& v : row)
                v /= sum;
            cpt.rows.push_back(std::move(row));
        }
        model.cpts[n.id] = std::move(cpt);
    }
    check_model(model);
    return model;
}

} // namespace cid

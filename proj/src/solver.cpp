#include "cid/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cid {

namespace {

// Shared enumeration scaffolding over the joint state space.
struct Engine {
    const CidModel* model;
    std::vector<int> topo;                    // node indices, topological
    std::vector<int> dom_size;                // per node index
    std::vector<std::vector<int>> parent_idx; // per node index
    std::vector<const Cpt*> cpt;              // nullptr for decision nodes
    std::vector<std::vector<double>> utility_value; // node -> per-domain-index value (empty if not utility)
    int decision = -1;                        // unique decision index, or -1

    explicit Engine(const CidModel& m) : model(&m) {
        const CidGraph& g = m.graph;
        joint_state_count(m); // state-space cap
        topo = g.topological_order();
        int n = g.node_count();
        dom_size.resize(n);
        parent_idx.resize(n);
        cpt.assign(n, nullptr);
        utility_value.resize(n);
        for (int i = 0; i < n; ++i) {
            const auto& node = g.node_at(i);
            dom_size[i] = m.domains.at(node.id).size();
            parent_idx[i] = g.parent_indices(i);
            auto it = m.cpts.find(node.id);
            if (it != m.cpts.end())
                cpt[i] = &it->second;
            if (node.kind == NodeKind::Utility) {
                auto& vals = utility_value[i];
                for (const auto& v : m.domains.at(node.id).values)
                    vals.push_back(v.number);
            }
            if (node.kind == NodeKind::Decision)
                decision = decision == -1 ? i : -2;
        }
    }

    long long cpt_row_index(int node, const std::vector<int>& assignment) const {
        long long index = 0;
        for (int p : parent_idx[node])
            index = index * dom_size[p] + assignment[p];
        return index;
    }

    double utility_sum(const std::vector<int>& assignment) const {
        double sum = 0.0;
        for (size_t i = 0; i < utility_value.size(); ++i)
            if (!utility_value[i].empty())
                sum += utility_value[i][assignment[i]];
        return sum;
    }

    // Enumerates every joint assignment with positive probability. `factor`
    // supplies the local probability of a node value given the assignment so
    // far (topological order guarantees parents are set). Zero-probability
    // branches are pruned.
    void for_each_assignment(
        const std::function<double(int node, int value, const std::vector<int>&)>& factor,
        const std::function<void(const std::vector<int>&, double)>& visit) const {
        std::vector<int> assignment(dom_size.size(), 0);
        std::function<void(size_t, double)> rec = [&](size_t level, double prob) {
            if (level == topo.size()) {
                visit(assignment, prob);
                return;
            }
            int node = topo[level];
            for (int v = 0; v < dom_size[node]; ++v) {
                double f = factor(node, v, assignment);
                if (f <= 0.0)
                    continue;
                assignment[node] = v;
                rec(level + 1, prob * f);
            }
            assignment[node] = 0;
        };
        rec(0, 1.0);
    }
};

// Mixed-radix index of an observed context inside a full assignment.
struct ContextIndexer {
    std::vector<int> nodes;
    std::vector<int> radices;
    long long total = 1;

    ContextIndexer() = default;
    ContextIndexer(const std::vector<int>& context_nodes, const std::vector<int>& dom_size) {
        nodes = context_nodes;
        for (int v : nodes)
            radices.push_back(dom_size[v]);
        total = detail::radix_total(radices);
    }

    long long index(const std::vector<int>& assignment) const {
        long long out = 0;
        for (size_t i = 0; i < nodes.size(); ++i)
            out = out * radices[i] + assignment[nodes[i]];
        return out;
    }
};

int resolve_value(const CidModel& model, const std::string& node, const std::string& token) {
    int v = model.domains.at(node).find(token);
    if (v < 0)
        throw CidError(ErrorCode::DomainMismatch,
                       "value '" + token + "' is not in the domain of '" + node + "'");
    return v;
}

// Validates a policy against the model and returns (context indexer, rule).
ContextIndexer policy_indexer(const Engine& eng, const Policy& policy) {
    const CidModel& m = *eng.model;
    const CidGraph& g = m.graph;
    int d = g.index_of(policy.decision);
    if (g.node_at(d).kind != NodeKind::Decision)
        throw CidError(ErrorCode::InvalidModel, "policy decision '" + policy.decision +
                                                    "' is not a decision node");
    std::vector<int> ctx;
    for (const auto& id : policy.context)
        ctx.push_back(g.index_of(id));
    ContextIndexer indexer(ctx, eng.dom_size);
    if (static_cast<long long>(policy.rule.size()) != indexer.total)
        throw CidError(ErrorCode::InvalidModel, "policy rule does not cover every context");
    for (int v : policy.rule)
        if (v < 0 || v >= eng.dom_size[d])
            throw CidError(ErrorCode::DomainMismatch, "policy rule value outside the decision domain");
    return indexer;
}

ContextIndexer intervention_indexer(const Engine& eng, const Intervention& intervention, int* target) {
    const CidModel& m = *eng.model;
    const CidGraph& g = m.graph;
    int x = g.index_of(intervention.target);
    if (g.node_at(x).kind == NodeKind::Decision)
        throw CidError(ErrorCode::IsDecisionNode, "cannot intervene on the decision node");
    ContextIndexer indexer(eng.parent_idx[x], eng.dom_size);
    if (static_cast<long long>(intervention.rule.size()) != indexer.total)
        throw CidError(ErrorCode::InvalidModel, "intervention rule does not cover every context");
    for (int v : intervention.rule)
        if (v < 0 || v >= eng.dom_size[x])
            throw CidError(ErrorCode::DomainMismatch,
                           "intervention rule value outside the target domain");
    *target = x;
    return indexer;
}

// Factor function for a fixed policy and optional intervention.
std::function<double(int, int, const std::vector<int>&)>
fixed_factors(const Engine& eng, const Policy& policy, const ContextIndexer& pol_ctx,
              const std::optional<Intervention>& intervention, int int_target,
              const ContextIndexer& int_ctx) {
    int d = eng.model->graph.index_of(policy.decision);
    return [&eng, &policy, &pol_ctx, &intervention, int_target, &int_ctx,
            d](int node, int value, const std::vector<int>& assignment) -> double {
        if (node == d)
            return policy.rule[pol_ctx.index(assignment)] == value ? 1.0 : 0.0;
        if (intervention && node == int_target)
            return intervention->rule[int_ctx.index(assignment)] == value ? 1.0 : 0.0;
        return eng.cpt[node]->rows[eng.cpt_row_index(node, assignment)][value];
    };
}

} // namespace

double joint_query(const CidModel& model, const Policy& policy,
                   const std::optional<Intervention>& intervention,
                   const std::map<std::string, std::string>& event) {
    Engine eng(model);
    ContextIndexer pol_ctx = policy_indexer(eng, policy);
    int int_target = -1;
    ContextIndexer int_ctx;
    if (intervention)
        int_ctx = intervention_indexer(eng, *intervention, &int_target);

    std::vector<int> required(model.graph.node_count(), -1);
    for (const auto& [id, token] : event)
        required[model.graph.index_of(id)] = resolve_value(model, id, token);

    auto base = fixed_factors(eng, policy, pol_ctx, intervention, int_target, int_ctx);
    double total = 0.0;
    eng.for_each_assignment(
        [&](int node, int value, const std::vector<int>& assignment) -> double {
            if (required[node] >= 0 && required[node] != value)
                return 0.0;
            return base(node, value, assignment);
        },
        [&](const std::vector<int>&, double prob) { total += prob; });
    return total;
}

double policy_value(const CidModel& model, const Policy& policy,
                    const std::optional<Intervention>& intervention) {
    Engine eng(model);
    ContextIndexer pol_ctx = policy_indexer(eng, policy);
    int int_target = -1;
    ContextIndexer int_ctx;
    if (intervention)
        int_ctx = intervention_indexer(eng, *intervention, &int_target);
    auto factors = fixed_factors(eng, policy, pol_ctx, intervention, int_target, int_ctx);
    double total = 0.0;
    eng.for_each_assignment(factors, [&](const std::vector<int>& assignment, double prob) {
        total += prob * eng.utility_sum(assignment);
    });
    return total;
}

OptimalResult optimal_value(const CidModel& model,
                            const std::optional<std::string>& add_info_link,
                            const std::optional<std::string>& drop_info_link) {
    const CidGraph& g = model.graph;
    std::string decision = single_decision(g);
    Engine eng(model);
    int d = g.index_of(decision);

    // The edited decision context. The parameterization never mentions the
    // decision, so link edits only change what the policy may read.
    std::vector<std::string> context = g.parents(decision);
    if (drop_info_link) {
        g.index_of(*drop_info_link);
        context.erase(std::remove(context.begin(), context.end(), *drop_info_link), context.end());
    }
    if (add_info_link && *add_info_link != drop_info_link.value_or("")) {
        int x = g.index_of(*add_info_link);
        if (x == d || descendant_mask(g, d)[x])
            throw CidError(ErrorCode::EditCreatesCycle,
                           "information link " + *add_info_link + " -> " + decision +
                               " would create a cycle");
        if (std::find(context.begin(), context.end(), *add_info_link) == context.end())
            context.push_back(*add_info_link);
    }

    std::vector<int> ctx_nodes;
    for (const auto& id : context)
        ctx_nodes.push_back(g.index_of(id));
    ContextIndexer indexer(ctx_nodes, eng.dom_size);

    // contribution[ctx][dv] = sum over consistent assignments of
    // P_chance * utility; the optimum picks the best choice per context.
    std::vector<std::vector<double>> contribution(
        static_cast<size_t>(indexer.total), std::vector<double>(eng.dom_size[d], 0.0));
    eng.for_each_assignment(
        [&](int node, int value, const std::vector<int>& assignment) -> double {
            if (node == d)
                return 1.0; // decision left free
            return eng.cpt[node]->rows[eng.cpt_row_index(node, assignment)][value];
        },
        [&](const std::vector<int>& assignment, double prob) {
            contribution[indexer.index(assignment)][assignment[d]] +=
                prob * eng.utility_sum(assignment);
        });

    OptimalResult result;
    result.policy.decision = decision;
    result.policy.context = context;
    result.policy.rule.reserve(contribution.size());
    for (const auto& row : contribution) {
        int best = 0;
        for (int v = 1; v < static_cast<int>(row.size()); ++v)
            if (row[v] > row[best])
                best = v;
        result.policy.rule.push_back(best);
        result.value += row[best];
    }
    return result;
}

double value_of_information(const CidModel& model, const std::string& X) {
    const CidGraph& g = model.graph;
    std::string decision = single_decision(g);
    int x = g.index_of(X);
    int d = g.index_of(decision);
    if (x == d || descendant_mask(g, d)[x])
        throw CidError(ErrorCode::NodeDescendsFromDecision,
                       "value of information is undefined for '" + X +
                           "': it is the decision or descends from it");
    double with = optimal_value(model, X, std::nullopt).value;
    double without = optimal_value(model, std::nullopt, X).value;
    return std::max(0.0, with - without);
}

double value_of_control(const CidModel& model, const std::string& X) {
    const CidGraph& g = model.graph;
    std::string decision = single_decision(g);
    int x = g.index_of(X);
    int d = g.index_of(decision);
    if (x == d)
        throw CidError(ErrorCode::IsDecisionNode,
                       "value of control is undefined for the decision node");

    Engine eng(model);
    double baseline = optimal_value(model).value;

    ContextIndexer d_ctx(eng.parent_idx[d], eng.dom_size);
    ContextIndexer x_ctx(eng.parent_idx[x], eng.dom_size);
    const int dn = eng.dom_size[d];
    const int xn = eng.dom_size[x];

    auto rule_space = [](long long contexts, int values) -> double {
        return static_cast<double>(contexts) * std::log2(static_cast<double>(values));
    };
    const double kMaxRuleBits = 21.0; // ~2 million rules

    // T[a][dv][b][xv]: weight of assignments whose decision context is a,
    // decision value dv, intervention context b, target value xv, with the
    // factors of D and X left out.
    long long t_size = d_ctx.total * dn * x_ctx.total * xn;
    if (t_size > 50000000)
        throw CidError(ErrorCode::StateSpaceTooLarge, "joint rule table exceeds the memory cap");
    std::vector<double> T(static_cast<size_t>(t_size), 0.0);
    auto t_at = [&](long long a, int dv, long long b, int xv) -> double& {
        return T[((a * dn + dv) * x_ctx.total + b) * xn + xv];
    };
    eng.for_each_assignment(
        [&](int node, int value, const std::vector<int>& assignment) -> double {
            if (node == d || node == x)
                return 1.0;
            return eng.cpt[node]->rows[eng.cpt_row_index(node, assignment)][value];
        },
        [&](const std::vector<int>& assignment, double prob) {
            t_at(d_ctx.index(assignment), assignment[d], x_ctx.index(assignment), assignment[x]) +=
                prob * eng.utility_sum(assignment);
        });

    // A rule digit whose choice never changes any table entry cannot change
    // the value; pinning such contexts shrinks the enumeration without
    // giving up exactness.
    std::vector<long long> relevant_x, relevant_d;
    for (long long b = 0; b < x_ctx.total; ++b) {
        bool matters = false;
        for (long long a = 0; a < d_ctx.total && !matters; ++a)
            for (int dv = 0; dv < dn && !matters; ++dv)
                for (int xv = 1; xv < xn && !matters; ++xv)
                    matters = t_at(a, dv, b, xv) != t_at(a, dv, b, 0);
        if (matters)
            relevant_x.push_back(b);
    }
    for (long long a = 0; a < d_ctx.total; ++a) {
        bool matters = false;
        for (long long b = 0; b < x_ctx.total && !matters; ++b)
            for (int xv = 0; xv < xn && !matters; ++xv)
                for (int dv = 1; dv < dn && !matters; ++dv)
                    matters = t_at(a, dv, b, xv) != t_at(a, 0, b, xv);
        if (matters)
            relevant_d.push_back(a);
    }
    const double pruned_bits_x = rule_space(static_cast<long long>(relevant_x.size()), xn);
    const double pruned_bits_d = rule_space(static_cast<long long>(relevant_d.size()), dn);
    if (pruned_bits_x > kMaxRuleBits && pruned_bits_d > kMaxRuleBits)
        throw CidError(ErrorCode::StateSpaceTooLarge,
                       "both deterministic rule spaces exceed the enumeration cap");

    // Enumerate the smaller rule space; optimize the other side per context.
    // S holds, for the current outer rule, the inner contribution table; an
    // odometer step only touches the suffix of digits that changed.
    bool outer_is_x = pruned_bits_x <= pruned_bits_d;
    const std::vector<long long>& outer_ctx = outer_is_x ? relevant_x : relevant_d;
    int outer_vals = outer_is_x ? xn : dn;
    long long inner_total = outer_is_x ? d_ctx.total : x_ctx.total;
    int inner_vals = outer_is_x ? dn : xn;

    auto t_entry = [&](long long inner_c, int inner_v, long long outer_c, int outer_v) {
        return outer_is_x ? t_at(inner_c, inner_v, outer_c, outer_v)
                          : t_at(outer_c, outer_v, inner_c, inner_v);
    };

    // Pinned (irrelevant) outer contexts contribute with choice 0; by
    // definition any other choice gives the same value.
    std::vector<double> S(static_cast<size_t>(inner_total * inner_vals), 0.0);
    long long outer_full_total = outer_is_x ? x_ctx.total : d_ctx.total;
    for (long long ic = 0; ic < inner_total; ++ic)
        for (int iv = 0; iv < inner_vals; ++iv)
            for (long long oc = 0; oc < outer_full_total; ++oc)
                S[ic * inner_vals + iv] += t_entry(ic, iv, oc, 0);

    auto evaluate = [&]() {
        double total = 0.0;
        for (long long ic = 0; ic < inner_total; ++ic) {
            double best = S[ic * inner_vals];
            for (int iv = 1; iv < inner_vals; ++iv)
                best = std::max(best, S[ic * inner_vals + iv]);
            total += best;
        }
        return total;
    };

    double joint_best = evaluate();
    std::vector<int> rule(outer_ctx.size(), 0);
    while (!rule.empty()) {
        // Odometer step over the outer rule, updating S incrementally.
        long long pos = static_cast<long long>(rule.size()) - 1;
        for (; pos >= 0; --pos) {
            int old_v = rule[pos];
            int new_v = old_v + 1 == outer_vals ? 0 : old_v + 1;
            rule[pos] = new_v;
            long long oc = outer_ctx[pos];
            for (long long ic = 0; ic < inner_total; ++ic)
                for (int iv = 0; iv < inner_vals; ++iv)
                    S[ic * inner_vals + iv] +=
                        t_entry(ic, iv, oc, new_v) - t_entry(ic, iv, oc, old_v);
            if (new_v != 0)
                break;
        }
        if (pos < 0)
            break; // wrapped: every rule visited
        joint_best = std::max(joint_best, evaluate());
    }

    return std::max(0.0, joint_best - baseline);
}

} // namespace cid

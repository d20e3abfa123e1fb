#include "cid/construct.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "cid/dsep.hpp"
#include "cid/incentives.hpp"
#include "cid/text_format.hpp"

namespace cid {

namespace {

// The constructions route "wires" through the graph. Every routed node
// carries one slot per wire passing it; a slot is a small random or
// deterministic function of slots on the node's graph parents. A node's
// domain is the product of its slot supports (single-slot nodes keep plain
// values, multi-slot chance nodes get "(a,b)" tuples, multi-slot utility
// nodes a balanced base-3 numeric encoding).
struct SlotRef {
    int node = -1;
    int slot = -1;
    bool valid() const { return node >= 0; }
};

struct Slot {
    enum class Kind {
        Coin,       // uniform on {-1,1}; 0 when a gate is present and != 1
        Copy,       // value of a
        Product,    // value of a times value of b
        ClampConst, // constant 0, support {0,1} (intervention can restore 1)
        UFinal,     // a*b - debt*a (a = frontdoor, b = backdoor predecessor)
    };
    Kind kind = Kind::Copy;
    SlotRef a, b;
    SlotRef gate;         // Coin only
    bool clamped = false; // CPT emits 0; supports keep the restorable values
    double debt = 0.0;    // UFinal only
    std::vector<double> support;
};

struct Wiring {
    const CidGraph* graph = nullptr;
    int decision = -1;
    std::vector<std::vector<Slot>> slots;

    explicit Wiring(const CidGraph& g, int d) : graph(&g), decision(d), slots(g.node_count()) {}

    SlotRef add(int node, Slot s) {
        slots[node].push_back(std::move(s));
        return {node, static_cast<int>(slots[node].size()) - 1};
    }
};

constexpr double kCoinValues[2] = {-1.0, 1.0};

// Directed shortest path (lexicographic tie-break) from `start` to any target,
// never touching a forbidden node. Returns node indices, start included.
std::optional<std::vector<int>> shortest_directed_path(const CidGraph& g, int start,
                                                       const std::vector<bool>& target,
                                                       const std::vector<bool>& forbidden) {
    if (target[start])
        return std::vector<int>{start};
    detail::PathQuery query;
    query.graph = &g;
    query.start = start;
    query.target = target;
    query.conditioned.assign(g.node_count(), false);
    query.collider_ok.assign(g.node_count(), false);
    query.forbidden = forbidden;
    query.forward_only = true;
    auto path = detail::shortest_active_path(query);
    if (!path)
        return std::nullopt;
    std::vector<int> out;
    for (const auto& id : path->nodes)
        out.push_back(g.index_of(id));
    return out;
}

// Lays out coins, copy chains and collider products along an active backdoor
// path. Returns X's own slot, the slot feeding the path's utility endpoint,
// and the collider slots (which still need observation witnesses).
struct BackdoorWires {
    SlotRef x_slot;
    SlotRef bp;
    std::vector<SlotRef> colliders;
};

BackdoorWires wire_backdoor(Wiring& w, const CidGraph& g, const UndirectedPath& path) {
    const int n_steps = path.length();
    std::vector<int> idx;
    for (const auto& id : path.nodes)
        idx.push_back(g.index_of(id));

    // Turning points split the path into one-directional segments.
    std::vector<int> turns{0};
    for (int i = 1; i < n_steps; ++i)
        if (path.steps[i - 1] != path.steps[i])
            turns.push_back(i);
    turns.push_back(n_steps);

    // Forks (pattern <- v ->) and the start when it leaves with the arrow
    // generate fresh coins.
    std::map<int, SlotRef> fork_slot; // path position -> slot
    if (path.steps[0] == Step::Forward)
        fork_slot[0] = w.add(idx[0], Slot{.kind = Slot::Kind::Coin});
    for (size_t t = 1; t + 1 < turns.size(); ++t) {
        int i = turns[t];
        if (path.steps[i - 1] == Step::Backward && path.steps[i] == Step::Forward)
            fork_slot[i] = w.add(idx[i], Slot{.kind = Slot::Kind::Coin});
    }

    // Fill each segment with copies flowing away from its fork end; remember
    // what arrives at each collider and at the endpoints.
    std::map<int, std::pair<SlotRef, SlotRef>> collider_inputs; // position -> (left, right)
    BackdoorWires out;
    for (size_t t = 0; t + 1 < turns.size(); ++t) {
        int lo = turns[t];
        int hi = turns[t + 1];
        bool forward = path.steps[lo] == Step::Forward;
        if (forward) {
            // Flow lo -> hi; lo holds a fork (or start) coin.
            SlotRef prev = fork_slot.at(lo);
            for (int i = lo + 1; i < hi; ++i)
                prev = w.add(idx[i], Slot{.kind = Slot::Kind::Copy, .a = prev});
            if (hi == n_steps)
                out.bp = prev;
            else
                collider_inputs[hi].first = prev;
        } else {
            // Flow hi -> lo; hi holds the fork.
            SlotRef prev = fork_slot.at(hi);
            for (int i = hi - 1; i > lo; --i)
                prev = w.add(idx[i], Slot{.kind = Slot::Kind::Copy, .a = prev});
            if (lo == 0)
                out.x_slot = w.add(idx[0], Slot{.kind = Slot::Kind::Copy, .a = prev});
            else
                collider_inputs[lo].second = prev;
        }
    }
    if (path.steps[0] == Step::Forward)
        out.x_slot = fork_slot.at(0);

    for (auto& [pos, inputs] : collider_inputs) {
        if (!inputs.first.valid() || !inputs.second.valid())
            throw CidError(ErrorCode::InvalidModel, "collider on the backdoor path lacks an input");
        out.colliders.push_back(
            w.add(idx[pos], Slot{.kind = Slot::Kind::Product, .a = inputs.first, .b = inputs.second}));
    }
    return out;
}

// Every collider parity must reach a conditioned node: either the collider is
// itself an observation, or a directed copy chain carries it into one (a
// chain into the decision delivers at the decision's parent on the chain).
void wire_witnesses(Wiring& w, const CidGraph& g, const std::vector<SlotRef>& colliders,
                    const std::string& decision, const std::string& X) {
    const int d = g.index_of(decision);
    std::set<int> observations;
    for (const auto& p : g.parents(decision))
        observations.insert(g.index_of(p));
    const int x = g.has_node(X) ? g.index_of(X) : -1;

    std::vector<bool> forbidden(g.node_count(), false);
    forbidden[d] = true;

    for (const SlotRef& collider : colliders) {
        if (observations.count(collider.node) && collider.node != x)
            continue; // the collider is observed; its parity is already visible
        std::vector<bool> target(g.node_count(), false);
        for (int o : observations)
            if (o != x)
                target[o] = true;
        auto chain = shortest_directed_path(g, collider.node, target, forbidden);
        if (!chain) {
            // Fall back to a chain into the decision itself; the last node
            // before the decision is an observation (possibly X).
            std::vector<bool> d_target(g.node_count(), false);
            d_target[d] = true;
            std::vector<bool> none(g.node_count(), false);
            auto to_d = shortest_directed_path(g, collider.node, d_target, none);
            if (!to_d || to_d->size() < 2)
                throw CidError(ErrorCode::InvalidModel,
                               "active collider has no witness chain into the conditioning set");
            to_d->pop_back();
            chain = std::move(to_d);
        }
        SlotRef prev = collider;
        for (size_t i = 1; i < chain->size(); ++i)
            prev = w.add((*chain)[i], Slot{.kind = Slot::Kind::Copy, .a = prev});
    }
}

// Copies the decision value along the frontdoor path and ties the chosen
// utility to frontdoor * backdoor. Utility nodes inside the frontdoor would
// add the copied decision value to the total utility; the chosen utility
// subtracts that contribution (pointwise), so the value function stays
// exactly E[D * backdoor].
void wire_frontdoor(Wiring& w, const CidGraph& g, const UndirectedPath& path, SlotRef bp) {
    std::vector<int> idx;
    for (const auto& id : path.nodes)
        idx.push_back(g.index_of(id));
    SlotRef prev{w.decision, -1};
    std::vector<SlotRef> debt_slots;
    for (size_t i = 1; i + 1 < idx.size(); ++i) {
        prev = w.add(idx[i], Slot{.kind = Slot::Kind::Copy, .a = prev});
        if (g.node_at(idx[i]).kind == NodeKind::Utility)
            debt_slots.push_back(prev);
    }
    double debt = 0.0;
    for (const SlotRef& ref : debt_slots)
        debt += std::pow(3.0, ref.slot);
    int u = idx.back();
    if (!w.slots[u].empty())
        throw CidError(ErrorCode::InvalidModel, "chosen utility already carries a wire");
    w.add(u, Slot{.kind = Slot::Kind::UFinal, .a = prev, .b = bp, .debt = debt});
}

// ----- supports, domains and CPTs --------------------------------------

void resolve_supports(Wiring& w) {
    auto ref_support = [&](const SlotRef& ref) -> const std::vector<double>* {
        static const std::vector<double> decision_support{-1.0, 1.0};
        if (ref.node == w.decision && ref.slot < 0)
            return &decision_support;
        const auto& s = w.slots[ref.node][ref.slot];
        return s.support.empty() ? nullptr : &s.support;
    };
    bool progress = true;
    bool pending = true;
    while (pending && progress) {
        progress = false;
        pending = false;
        for (auto& node_slots : w.slots) {
            for (auto& slot : node_slots) {
                if (!slot.support.empty())
                    continue;
                std::set<double> values;
                switch (slot.kind) {
                case Slot::Kind::Coin:
                    values = {-1.0, 1.0};
                    if (slot.gate.valid())
                        values.insert(0.0);
                    break;
                case Slot::Kind::ClampConst:
                    values = {0.0, 1.0};
                    break;
                case Slot::Kind::Copy: {
                    auto* src = ref_support(slot.a);
                    if (!src) {
                        pending = true;
                        continue;
                    }
                    values.insert(src->begin(), src->end());
                    break;
                }
                case Slot::Kind::Product: {
                    auto* sa = ref_support(slot.a);
                    auto* sb = ref_support(slot.b);
                    if (!sa || !sb) {
                        pending = true;
                        continue;
                    }
                    for (double va : *sa)
                        for (double vb : *sb)
                            values.insert(va * vb);
                    break;
                }
                case Slot::Kind::UFinal: {
                    auto* sa = ref_support(slot.a);
                    auto* sb = ref_support(slot.b);
                    if (!sa || !sb) {
                        pending = true;
                        continue;
                    }
                    for (double va : *sa)
                        for (double vb : *sb)
                            values.insert(va * vb - slot.debt * va);
                    break;
                }
                }
                if (slot.clamped)
                    values.insert(0.0);
                slot.support.assign(values.begin(), values.end());
                progress = true;
            }
        }
    }
    if (pending)
        throw CidError(ErrorCode::InvalidModel, "cyclic wiring while resolving slot supports");
}

std::string tuple_label(const std::vector<double>& values) {
    std::string out = "(";
    for (size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ",";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", values[i]);
        out += buf;
    }
    out += ")";
    return out;
}

CidModel build_model(const CidGraph& graph, Wiring& w) {
    resolve_supports(w);
    const int n = graph.node_count();

    CidModel model;
    model.graph = graph;

    // Domains first: slot-value combinations, slot 0 varying slowest.
    std::vector<std::vector<std::vector<double>>> combos(n); // node -> domain index -> slot values
    for (int i = 0; i < n; ++i) {
        const auto& node = graph.node_at(i);
        Domain dom;
        if (node.kind == NodeKind::Decision) {
            dom.values = {Value::from_number(-1), Value::from_number(1)};
            combos[i] = {{-1.0}, {1.0}};
            model.domains[node.id] = std::move(dom);
            continue;
        }
        const auto& slots = w.slots[i];
        if (slots.empty()) {
            dom.values = {Value::from_number(0)};
            combos[i] = {{0.0}};
            model.domains[node.id] = std::move(dom);
            continue;
        }
        std::vector<int> radices;
        for (const auto& s : slots)
            radices.push_back(static_cast<int>(s.support.size()));
        std::vector<int> digits(radices.size(), 0);
        do {
            std::vector<double> vals;
            for (size_t k = 0; k < digits.size(); ++k)
                vals.push_back(slots[k].support[digits[k]]);
            if (node.kind == NodeKind::Utility) {
                double encoded = 0.0;
                for (size_t k = 0; k < vals.size(); ++k) {
                    if (vals.size() > 1 && std::abs(vals[k]) > 1.0)
                        throw CidError(ErrorCode::InvalidModel,
                                       "multi-slot utility value outside the encodable range");
                    encoded += vals[k] * std::pow(3.0, k);
                }
                dom.values.push_back(Value::from_number(encoded));
            } else if (vals.size() == 1) {
                dom.values.push_back(Value::from_number(vals[0]));
            } else {
                dom.values.push_back(Value::from_token(tuple_label(vals)));
            }
            combos[i].push_back(std::move(vals));
        } while (detail::radix_increment(digits, radices));
        model.domains[node.id] = std::move(dom);
    }

    // CPTs: each row multiplies the per-slot distributions.
    for (int i = 0; i < n; ++i) {
        const auto& node = graph.node_at(i);
        if (node.kind == NodeKind::Decision)
            continue;
        Cpt cpt;
        cpt.owner = node.id;
        cpt.parent_order = graph.parents(node.id);
        const auto& parent_idx = graph.parent_indices(i);
        std::vector<int> radices;
        for (int p : parent_idx)
            radices.push_back(model.domains.at(graph.node_at(p).id).size());
        const auto& slots = w.slots[i];

        std::vector<int> digits(radices.size(), 0);
        do {
            // Slot value of a source ref under the current parent assignment.
            auto read = [&](const SlotRef& ref) -> double {
                for (size_t k = 0; k < parent_idx.size(); ++k)
                    if (parent_idx[k] == ref.node)
                        return ref.slot < 0 ? combos[ref.node][digits[k]][0]
                                            : combos[ref.node][digits[k]][ref.slot];
                throw CidError(ErrorCode::InvalidModel, "wire source is not a graph parent");
            };
            std::vector<double> row;
            if (slots.empty()) {
                row = {1.0};
            } else {
                // Per-slot distribution over its support.
                std::vector<std::vector<double>> dist;
                for (const auto& slot : slots) {
                    std::vector<double> d(slot.support.size(), 0.0);
                    auto put = [&](double value, double p) {
                        auto it = std::find(slot.support.begin(), slot.support.end(), value);
                        d[static_cast<size_t>(it - slot.support.begin())] += p;
                    };
                    if (slot.clamped) {
                        put(0.0, 1.0);
                    } else {
                        switch (slot.kind) {
                        case Slot::Kind::Coin:
                            if (slot.gate.valid() && read(slot.gate) != 1.0) {
                                put(0.0, 1.0);
                            } else {
                                put(-1.0, 0.5);
                                put(1.0, 0.5);
                            }
                            break;
                        case Slot::Kind::ClampConst:
                            put(0.0, 1.0);
                            break;
                        case Slot::Kind::Copy:
                            put(read(slot.a), 1.0);
                            break;
                        case Slot::Kind::Product:
                            put(read(slot.a) * read(slot.b), 1.0);
                            break;
                        case Slot::Kind::UFinal: {
                            double a = read(slot.a);
                            put(a * read(slot.b) - slot.debt * a, 1.0);
                            break;
                        }
                        }
                    }
                    dist.push_back(std::move(d));
                }
                row.assign(combos[i].size(), 1.0);
                std::vector<int> slot_radices;
                for (const auto& d : dist)
                    slot_radices.push_back(static_cast<int>(d.size()));
                std::vector<int> slot_digits(slot_radices.size(), 0);
                size_t combo = 0;
                do {
                    for (size_t k = 0; k < dist.size(); ++k)
                        row[combo] *= dist[k][slot_digits[k]];
                    ++combo;
                } while (detail::radix_increment(slot_digits, slot_radices));
            }
            cpt.rows.push_back(std::move(row));
        } while (detail::radix_increment(digits, radices));
        model.cpts[node.id] = std::move(cpt);
    }

    check_model(model);
    return model;
}

Wiring completeness_wiring(const CidGraph& graph, const std::string& X, SlotRef* x_slot_out) {
    const std::string decision = single_decision(graph);
    SupportingPair pair = find_supporting_pair(graph, X);

    Wiring w(graph, graph.index_of(decision));
    BackdoorWires back = wire_backdoor(w, graph, pair.backdoor);
    wire_witnesses(w, graph, back.colliders, decision, X);
    wire_frontdoor(w, graph, pair.frontdoor, back.bp);
    if (x_slot_out)
        *x_slot_out = back.x_slot;
    return w;
}

} // namespace

CidModel completeness_construction(const CidGraph& graph, const std::string& X) {
    Wiring w = completeness_wiring(graph, X, nullptr);
    return build_model(graph, w);
}

CidModel control_construction(const CidGraph& graph, const std::string& X) {
    const std::string decision = single_decision(graph);
    graph.index_of(X);
    InterventionClass cls = intervention_incentive(graph, X);
    if (cls == InterventionClass::None)
        throw CidError(ErrorCode::NoIncentive,
                       "node '" + X + "' does not satisfy the intervention incentive criterion");

    const int d = graph.index_of(decision);
    const int x = graph.index_of(X);

    // Case 1: a directed path to a utility that avoids the decision becomes a
    // clamped binary copy chain.
    {
        std::vector<bool> target(graph.node_count(), false);
        for (int i = 0; i < graph.node_count(); ++i)
            target[i] = graph.node_at(i).kind == NodeKind::Utility;
        std::vector<bool> forbidden(graph.node_count(), false);
        forbidden[d] = true;
        auto chain = shortest_directed_path(graph, x, target, forbidden);
        if (chain) {
            Wiring w(graph, d);
            SlotRef prev = w.add(x, Slot{.kind = Slot::Kind::ClampConst});
            for (size_t i = 1; i < chain->size(); ++i)
                prev = w.add((*chain)[i], Slot{.kind = Slot::Kind::Copy, .a = prev});
            return build_model(graph, w);
        }
    }

    auto requisite = requisite_observations(graph);

    // Case 2: X is a requisite observation; clamp it inside its own
    // completeness construction.
    if (requisite.count(X)) {
        SlotRef x_slot;
        Wiring w = completeness_wiring(graph, X, &x_slot);
        for (auto& slot : w.slots[x])
            slot.clamped = true;
        return build_model(graph, w);
    }

    // Case 3: X is an ancestor of a requisite observation O: gate O's source
    // with a copy chain from X, clamped to 0 unless the intervention fires.
    std::vector<bool> target(graph.node_count(), false);
    for (const auto& id : requisite)
        target[graph.index_of(id)] = true;
    std::vector<bool> forbidden(graph.node_count(), false);
    forbidden[d] = true;
    auto chain = shortest_directed_path(graph, x, target, forbidden);
    if (!chain || chain->size() < 2)
        throw CidError(ErrorCode::InvalidModel,
                       "intervention incentive without a path to a requisite observation");
    const std::string O = graph.node_at(chain->back()).id;

    SlotRef o_slot;
    Wiring w = completeness_wiring(graph, O, &o_slot);
    SlotRef prev = w.add(x, Slot{.kind = Slot::Kind::ClampConst});
    for (size_t i = 1; i + 1 < chain->size(); ++i)
        prev = w.add((*chain)[i], Slot{.kind = Slot::Kind::Copy, .a = prev});
    Slot& main = w.slots[o_slot.node][o_slot.slot];
    switch (main.kind) {
    case Slot::Kind::Coin:
        main.gate = prev;
        break;
    case Slot::Kind::Copy:
        main.kind = Slot::Kind::Product;
        main.b = prev;
        break;
    default:
        throw CidError(ErrorCode::InvalidModel, "unexpected wire kind at the gated observation");
    }
    return build_model(graph, w);
}

} // namespace cid

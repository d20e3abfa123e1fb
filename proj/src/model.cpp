#include "cid/model.hpp"

#include <cmath>

namespace cid {

void check_model(const CidModel& model, int max_domain_size) {
    const CidGraph& g = model.graph;
    for (const auto& n : g.nodes()) {
        auto dom_it = model.domains.find(n.id);
        if (dom_it == model.domains.end())
            throw CidError(ErrorCode::InvalidModel, "node '" + n.id + "' has no domain");
        const Domain& dom = dom_it->second;
        if (dom.size() == 0)
            throw CidError(ErrorCode::InvalidModel, "empty domain for node '" + n.id + "'");
        if (max_domain_size > 0 && dom.size() > max_domain_size)
            throw CidError(ErrorCode::DomainMismatch,
                           "domain of '" + n.id + "' exceeds the size cap of " +
                               std::to_string(max_domain_size));
        for (int i = 0; i < dom.size(); ++i)
            for (int j = i + 1; j < dom.size(); ++j)
                if (dom.values[i] == dom.values[j])
                    throw CidError(ErrorCode::DomainMismatch,
                                   "duplicate domain value for node '" + n.id + "'");
        if (n.kind == NodeKind::Utility && !dom.all_numeric())
            throw CidError(ErrorCode::NonNumericUtilityDomain,
                           "utility node '" + n.id + "' has a non-numeric domain value");

        auto cpt_it = model.cpts.find(n.id);
        if (n.kind == NodeKind::Decision) {
            if (cpt_it != model.cpts.end())
                throw CidError(ErrorCode::InvalidModel,
                               "decision node '" + n.id + "' must not have a cpt");
            continue;
        }
        if (cpt_it == model.cpts.end())
            throw CidError(ErrorCode::MissingCpt, "non-decision node '" + n.id + "' has no cpt");
        const Cpt& cpt = cpt_it->second;
        if (cpt.parent_order != g.parents(n.id))
            throw CidError(ErrorCode::InvalidModel,
                           "cpt parent order of '" + n.id + "' does not match the graph parents");
        std::vector<int> radices;
        for (const auto& p : cpt.parent_order)
            radices.push_back(model.domains.at(p).size());
        if (static_cast<long long>(cpt.rows.size()) != detail::radix_total(radices))
            throw CidError(ErrorCode::MissingCpt,
                           "cpt for '" + n.id + "' does not cover every parent assignment");
        for (const auto& row : cpt.rows) {
            if (static_cast<int>(row.size()) != dom.size())
                throw CidError(ErrorCode::DomainMismatch,
                               "cpt row width for '" + n.id + "' does not match its domain");
            double sum = 0.0;
            for (double p : row) {
                if (!(p >= -1e-12) || !(p <= 1.0 + 1e-9) || !std::isfinite(p))
                    throw CidError(ErrorCode::RowNotNormalized,
                                   "cpt entry outside [0,1] for node '" + n.id + "'");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw CidError(ErrorCode::RowNotNormalized,
                               "cpt row for '" + n.id + "' sums to " + std::to_string(sum));
        }
    }
}

long long joint_state_count(const CidModel& model) {
    long long total = 1;
    for (const auto& n : model.graph.nodes()) {
        total *= model.domains.at(n.id).size();
        if (total > kMaxJointStates)
            throw CidError(ErrorCode::StateSpaceTooLarge,
                           "joint state space exceeds " + std::to_string(kMaxJointStates) +
                               " states");
    }
    return total;
}

} // namespace cid

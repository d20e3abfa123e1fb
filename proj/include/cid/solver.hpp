#ifndef CID_SOLVER_HPP
#define CID_SOLVER_HPP

#include <map>
#include <optional>
#include <string>

#include "cid/model.hpp"

namespace cid {

// Probability of a partial assignment under policy (and optional soft
// intervention), by exact enumeration of the joint. Event values are domain
// tokens keyed by node id.
double joint_query(const CidModel& model, const Policy& policy,
                   const std::optional<Intervention>& intervention,
                   const std::map<std::string, std::string>& event);

// Expected sum of utility node values.
double policy_value(const CidModel& model, const Policy& policy,
                    const std::optional<Intervention>& intervention = std::nullopt);

struct OptimalResult {
    double value = 0.0;
    Policy policy;
};

// Exact maximum over deterministic policies of the (optionally edited)
// decision context. The argmax policy breaks ties toward the
// lexicographically smallest rule in domain order. add/drop edits are
// idempotent: adding a present link or dropping an absent one is a no-op.
OptimalResult optimal_value(const CidModel& model,
                            const std::optional<std::string>& add_info_link = std::nullopt,
                            const std::optional<std::string>& drop_info_link = std::nullopt);

// V* with the information link X -> D present minus V* with it absent.
double value_of_information(const CidModel& model, const std::string& X);

// Max over deterministic (policy, intervention-on-X) pairs minus max over
// policies alone.
double value_of_control(const CidModel& model, const std::string& X);

} // namespace cid

#endif // CID_SOLVER_HPP

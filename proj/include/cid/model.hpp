#ifndef CID_MODEL_HPP
#define CID_MODEL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cid/graph.hpp"

namespace cid {

// A domain value: the canonical token plus, when it parses as a decimal
// rational, its numeric reading. Utility-node domains must be all-numeric.
struct Value {
    std::string text;
    bool numeric = false;
    double number = 0.0;

    static Value from_token(const std::string& token);
    static Value from_number(double v);

    bool operator==(const Value& other) const {
        if (numeric && other.numeric)
            return number == other.number;
        return !numeric && !other.numeric && text == other.text;
    }
};

struct Domain {
    std::vector<Value> values;

    int size() const { return static_cast<int>(values.size()); }
    // Index of the value matching the token, or -1.
    int find(const std::string& token) const;
    bool all_numeric() const;
};

// Conditional probability table. Rows are indexed by the mixed-radix index of
// the full parent assignment (parents in graph parent order, last parent
// varying fastest); each row is a distribution over the owner's domain order.
struct Cpt {
    std::string owner;
    std::vector<std::string> parent_order;
    std::vector<std::vector<double>> rows;
};

struct CidModel {
    CidGraph graph;
    std::map<std::string, Domain> domains;
    std::map<std::string, Cpt> cpts; // every non-decision node
};

// Deterministic decision rule. `context` is the list of observed nodes (the
// decision's parents, possibly edited); rule[i] is a domain index of the
// decision for the i-th context assignment (mixed-radix, last context node
// varying fastest).
struct Policy {
    std::string decision;
    std::vector<std::string> context;
    std::vector<int> rule;
};

// Deterministic soft intervention: replaces the target's Cpt by a
// deterministic function of its graph parents.
struct Intervention {
    std::string target;
    std::vector<int> rule; // indexed like Cpt rows
};

// Model invariant checks; throws MissingCpt / RowNotNormalized /
// DomainMismatch / NonNumericUtilityDomain / InvalidModel.
void check_model(const CidModel& model, int max_domain_size = 0); // 0 = no cap

// Number of joint states (product of domain sizes); throws
// StateSpaceTooLarge above the cap used by the exact solver.
long long joint_state_count(const CidModel& model);
inline constexpr long long kMaxJointStates = 1000000;

namespace detail {

// Mixed-radix indexing, last digit varying fastest.
inline long long radix_total(const std::vector<int>& radices) {
    long long total = 1;
    for (int r : radices)
        total *= r;
    return total;
}

inline long long radix_index(const std::vector<int>& radices, const std::vector<int>& digits) {
    long long index = 0;
    for (size_t i = 0; i < radices.size(); ++i)
        index = index * radices[i] + digits[i];
    return index;
}

// Odometer step; returns false after the last combination wraps to zero.
inline bool radix_increment(std::vector<int>& digits, const std::vector<int>& radices) {
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
        if (++digits[i] < radices[i])
            return true;
        digits[i] = 0;
    }
    return false;
}

} // namespace detail

} // namespace cid

#endif // CID_MODEL_HPP

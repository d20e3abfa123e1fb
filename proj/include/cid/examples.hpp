#ifndef CID_EXAMPLES_HPP
#define CID_EXAMPLES_HPP

#include <string>
#include <vector>

#include "cid/graph.hpp"

namespace cid {

// Built-in example corpus. Names: fitness-obs, fitness-int, obs-vs-int,
// method-graph, fair-unbiased, fair-biased, qa-standard, qa-read, qa-reward,
// mdp-theta. mdp-theta takes a horizon (number of decisions, default 2) and
// optionally the id of the one decision to keep; the other decisions are
// emitted as chance nodes so single-decision analysis applies. Throws
// UnknownExample / BadParams.
std::string builtin_example(const std::string& name, int mdp_horizon = 2,
                            const std::string& mdp_keep_decision = "");

const std::vector<std::string>& builtin_example_names();

} // namespace cid

#endif // CID_EXAMPLES_HPP

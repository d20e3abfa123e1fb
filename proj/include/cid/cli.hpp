#ifndef CID_CLI_HPP
#define CID_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace cid {

// Command-line front end. `args` excludes the program name. Returns 0 on
// success, 1 on analysis errors, 2 on usage errors; never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cid

#endif // CID_CLI_HPP

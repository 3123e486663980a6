#ifndef NRC_CLI_HPP_
#define NRC_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace nrc {

/// Runs the `nrc` command line (`args` excludes the program name).
/// Results go to `out`, diagnostics to `err`. Returns 0 on success, 1 when
/// a diagnostic was reported and 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nrc

#endif  // NRC_CLI_HPP_

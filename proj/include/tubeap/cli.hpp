#ifndef TUBEAP_CLI_HPP
#define TUBEAP_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace tubeap::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

/// Runs one subcommand. args excludes the program name. Results go to out (or --output),
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace tubeap::cli

#endif  // TUBEAP_CLI_HPP

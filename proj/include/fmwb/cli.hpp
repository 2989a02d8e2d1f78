#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fmwb {

/// Runs one command line (without the program name). Reports go to out,
/// diagnostics to err. Exit codes: 0 computed (including negative findings),
/// 2 input error, 3 configured bound exceeded, 1 internal failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fmwb

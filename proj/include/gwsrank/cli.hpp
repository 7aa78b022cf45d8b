#pragma once

#include <string>
#include <vector>

namespace gwsrank {

// Subcommand dispatch for the gwsrank tool. Exit codes: 0 success, 2 usage or
// configuration error, 3 load/parse error, 4 contract violation, 5 training
// or orchestration failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace gwsrank

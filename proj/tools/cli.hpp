#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace siedm::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIo = 2,
  kFormat = 3,
  kQuery = 4,
  kDisagree = 5,  // oracle cross-check found a difference
};

// argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace siedm::cli

#pragma once

#include <string>
#include <vector>

namespace ckballs::cli {

struct CommandResult {
    int exit_code = 0;            // 0 computed (any answer), 1 invalid input,
                                  // 2 undecided where --strict demanded an answer
    std::string stdout_payload;   // JSON document (or help text)
    std::vector<std::string> artifacts;  // files written
};

CommandResult run(const std::vector<std::string>& args);

}  // namespace ckballs::cli

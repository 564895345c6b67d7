#include <iostream>
#include <string>
#include <vector>

#include "ckballs/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const ckballs::cli::CommandResult result = ckballs::cli::run(args);
    std::cout << result.stdout_payload << std::endl;
    return result.exit_code;
}

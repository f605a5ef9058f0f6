#include <iostream>
#include <string>
#include <vector>

#include "steinhull/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return steinhull::cli_dispatch(args, std::cout, std::cerr);
}

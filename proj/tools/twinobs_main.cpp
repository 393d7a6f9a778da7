#include "twinobs/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return twinobs::run_cli(args, std::cin, std::cout, std::cerr);
}

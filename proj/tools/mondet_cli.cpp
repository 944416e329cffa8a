#include <iostream>

#include "mondet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mondet::runCommand(args, std::cout, std::cerr);
}

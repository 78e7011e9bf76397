#include <iostream>
#include <string>
#include <vector>

#include "dkp/cli/commands.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return dkp::cli::run(args, std::cout, std::cerr);
}

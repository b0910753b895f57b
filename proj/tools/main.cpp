#include <iostream>

#include "rtm/cli.hpp"

int main(int argc, char** argv)
{
    return rtm::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

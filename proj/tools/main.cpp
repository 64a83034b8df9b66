#include "rankdist/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return rankdist::cli::run_command(argc, argv, std::cout, std::cerr);
}

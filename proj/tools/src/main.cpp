#include "bvass1_cli/cli.hpp"

#include <iostream>

int main( int argc, char** argv )
{
    return bvass1::cli::run( argc, argv, std::cout, std::cerr );
}

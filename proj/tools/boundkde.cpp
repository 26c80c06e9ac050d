#include "boundkde/cli_io.hpp"

#include <iostream>

int
main(int argc, char** argv)
{
  return boundkde::run_cli(argc, argv, std::cout, std::cerr);
}

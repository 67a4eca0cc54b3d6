#include "gldpdq/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return gldpdq::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}

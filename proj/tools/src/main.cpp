// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "commands.hpp"

int main(int argc, char **argv)
{
  return plap::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}

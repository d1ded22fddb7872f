#include <iostream>

#include "app/cli.h"

int main(int argc, char** argv) {
  return epf::app::RunCli(argc, argv, std::cout, std::cerr);
}

#include <certlint/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
   const std::vector<std::string> args(argv + 1, argv + argc);
   return certlint::cli::run(args, std::cout, std::cerr);
}

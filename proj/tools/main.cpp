#include <cstdlib>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::optional<std::string> seed_override;
  if (const char* v = std::getenv("SEED_OVERRIDE")) seed_override = v;
  return cauchy::cli::run({argv + 1, argv + argc}, std::cout, std::cerr, seed_override);
}

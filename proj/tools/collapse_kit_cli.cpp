#include <iostream>

#include "collapse_kit/cli/config.hpp"
#include "collapse_kit/cli/run.hpp"

int main(int argc, char** argv) {
  collapse_kit::cli::RunConfig cfg;
  if (const auto status = collapse_kit::cli::parse_args(argc, argv, cfg)) return *status;
  return collapse_kit::cli::run(cfg, std::cout, std::cerr);
}

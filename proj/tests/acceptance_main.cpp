// One line per acceptance criterion; nonzero exit if any fails.
#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "carroll/cli/acceptance.hpp"

int main(int argc, char** argv) {
  carroll::cli::AcceptanceOptions opt;
  if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  carroll::cli::run_acceptance(opt, [&](const carroll::cli::Criterion& c) {
    failed += c.pass ? 0 : 1;
    std::cout << carroll::cli::report_line(c) << std::endl;
  });
  std::printf("%d criteria failed\n", failed);
  return failed ? 1 : 0;
}

// One line per acceptance criterion; nonzero exit if any fails.
#include <cstring>
#include <iomanip>
#include <iostream>

#include "annulus/invariants.hpp"

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const auto cfg = quick ? annulus::SuiteConfig::quick() : annulus::SuiteConfig::full();
  int failed = 0;
  annulus::run_suite(cfg, [&](const annulus::CriterionResult& res) {
    std::cout << (res.pass ? "PASS" : "FAIL") << "  [" << res.id << "] " << res.title << "  (" << std::fixed
              << std::setprecision(1) << res.seconds << " s)\n      " << res.detail << std::endl;
    if (!res.pass) ++failed;
  });
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << failed << " failing criteria\n";
  return failed ? 1 : 0;
}

// Standalone acceptance runner: one pass/fail line per criterion.

#include <cstdio>

#include "acceptance_suite.hpp"

int main() {
  bool all = true;
  for (const auto& r : acceptance::run_all(0)) {
    std::printf("criterion %2d: %s  %s (worst=%.3g)\n", r.id, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.worst);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

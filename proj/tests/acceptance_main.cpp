#include "sodw/acceptance.hpp"

#include <cstdio>

int main() {
  int failed = 0;
  for (const auto& r : sodw::run_acceptance()) {
    std::puts(sodw::format_result(r).c_str());
    if (!r.passed) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, sodw::acceptance_criteria().size());
  return failed == 0 ? 0 : 1;
}

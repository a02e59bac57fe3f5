#include <cstdlib>
#include <iostream>
#include <vector>

#include "lcm/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  bool ok = true;
  for (const auto& r : lcm::run_acceptance(ids)) {
    std::cout << lcm::format_result(r) << std::endl;
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

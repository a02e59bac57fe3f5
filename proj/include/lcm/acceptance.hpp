#ifndef LCM_ACCEPTANCE_HPP
#define LCM_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace lcm {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id);
/// Runs the given criteria (all when empty) in order.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {});
/// "PASS  3  title  detail" style single line.
std::string format_result(const CriterionResult& r);

}  // namespace lcm

#endif

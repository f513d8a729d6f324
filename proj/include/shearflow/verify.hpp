#pragma once

#include <functional>
#include <string>
#include <vector>

namespace shearflow::verify {

struct CheckResult {
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance checks (all when filter is empty, otherwise those
/// whose id contains the filter).  on_done fires after each check.
std::vector<CheckResult> run_acceptance(
    const std::string& filter = {},
    const std::function<void(const CheckResult&)>& on_done = {});

std::vector<std::string> check_ids();

}  // namespace shearflow::verify

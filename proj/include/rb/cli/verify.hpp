#ifndef RB_CLI_VERIFY_HPP_
#define RB_CLI_VERIFY_HPP_

#include <string>
#include <vector>

namespace rb::cli {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Runs the analytic oracle identities: the 0.5 / 0.5^K joint-event table, the
// marginal-collapse identity over random histories, and the four-scenario
// nested-sample table. Optionally writes the two tables as CSV files under
// `csv_dir`.
VerifyReport verify_oracles(const std::string& csv_dir = "");

}  // namespace rb::cli

#endif  // RB_CLI_VERIFY_HPP_

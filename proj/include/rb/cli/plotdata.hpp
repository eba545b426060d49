#ifndef RB_CLI_PLOTDATA_HPP_
#define RB_CLI_PLOTDATA_HPP_

#include <string>
#include <vector>

namespace rb::cli {

// figure ids: "return-curve" (mean and 95% t-interval over seeds, resampled
// onto the first run's step grid by linear interpolation) and
// "loss-return-scatter" (per run: mean order-0 loss vs mean return per agent).
std::string emit_plot_data(const std::vector<std::string>& subrun_dirs,
                           const std::string& figure_id,
                           const std::string& agent_name,
                           const std::string& out_path);

// 95% two-sided Student t quantile for n samples (df = n-1).
double t_quantile_975(int n);

}  // namespace rb::cli

#endif  // RB_CLI_PLOTDATA_HPP_

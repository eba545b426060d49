#include "rb/cli/plotdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "rb/cli/experiment.hpp"

namespace rb::cli {

double t_quantile_975(int n) {
  static const double kTable[] = {0,     12.706, 4.303, 3.182, 2.776, 2.571,
                                  2.447, 2.365,  2.306, 2.262, 2.228, 2.201,
                                  2.179, 2.160,  2.145, 2.131, 2.120, 2.110,
                                  2.101, 2.093,  2.086, 2.080, 2.074, 2.069,
                                  2.064, 2.060,  2.056, 2.052, 2.048, 2.045,
                                  2.042};
  const int df = n - 1;
  if (df <= 0) return 0.0;
  if (df <= 30) return kTable[df];
  return 1.96;
}

namespace {

struct Series {
  std::vector<double> steps;
  std::vector<double> values;
};

double interp(const Series& s, double step) {
  if (s.steps.empty()) throw std::runtime_error("plot: empty series");
  if (step <= s.steps.front()) return s.values.front();
  if (step >= s.steps.back()) return s.values.back();
  const auto it = std::lower_bound(s.steps.begin(), s.steps.end(), step);
  const std::size_t hi = static_cast<std::size_t>(it - s.steps.begin());
  const std::size_t lo = hi - 1;
  const double w = (step - s.steps[lo]) / (s.steps[hi] - s.steps[lo]);
  return s.values[lo] + w * (s.values[hi] - s.values[lo]);
}

}  // namespace

std::string emit_plot_data(const std::vector<std::string>& subrun_dirs,
                           const std::string& figure_id,
                           const std::string& agent_name,
                           const std::string& out_path) {
  if (subrun_dirs.empty())
    throw std::invalid_argument("emit_plot_data: no runs given");
  std::vector<ParsedMetrics> runs;
  for (const auto& dir : subrun_dirs)
    runs.push_back(read_metrics_csv(dir + "/metrics.csv"));

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("emit_plot_data: cannot open " + out_path);
  out << "# rb-plot v1 figure=" << figure_id << " agent=" << agent_name;
  for (const auto& r : runs)
    out << " run=" << r.config_hash << ":" << r.seed;
  out << "\n";

  if (figure_id == "return-curve") {
    std::vector<Series> series;
    for (const auto& r : runs) {
      Series s;
      for (const auto& row : r.rows) {
        if (row.agent != agent_name) continue;
        s.steps.push_back(static_cast<double>(row.step));
        s.values.push_back(row.mean_return);
      }
      if (s.steps.empty())
        throw std::runtime_error("emit_plot_data: no rows for agent " +
                                 agent_name);
      series.push_back(std::move(s));
    }
    out << "step,mean,ci_low,ci_high\n";
    const int n = static_cast<int>(series.size());
    const double tq = t_quantile_975(n);
    for (std::size_t i = 0; i < series[0].steps.size(); ++i) {
      const double step = series[0].steps[i];
      double sum = 0.0, sum2 = 0.0;
      for (const auto& s : series) {
        const double v = interp(s, step);
        sum += v;
        sum2 += v * v;
      }
      const double mean = sum / n;
      double half = 0.0;
      if (n > 1) {
        const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1));
        half = tq * std::sqrt(var / n);
      }
      out << static_cast<long long>(step) << ',' << mean << ',' << mean - half
          << ',' << mean + half << "\n";
    }
    return out_path;
  }

  if (figure_id == "loss-return-scatter") {
    out << "run,agent,mean_l0,mean_return\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
      // one point per agent present in the run
      std::vector<std::string> agents;
      for (const auto& row : runs[r].rows)
        if (std::find(agents.begin(), agents.end(), row.agent) == agents.end())
          agents.push_back(row.agent);
      for (const auto& a : agents) {
        double l0 = 0.0, ret = 0.0;
        int n = 0;
        for (const auto& row : runs[r].rows) {
          if (row.agent != a) continue;
          l0 += row.update.l0;
          ret += row.mean_return;
          ++n;
        }
        out << runs[r].config_hash << ':' << runs[r].seed << ',' << a << ','
            << l0 / n << ',' << ret / n << "\n";
      }
    }
    return out_path;
  }

  throw std::invalid_argument("emit_plot_data: unknown figure id " + figure_id);
}

}  // namespace rb::cli

#include "vbifem/metrics.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "vbifem/error.hpp"

namespace vbifem {

namespace {

std::string to_text(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

ErrorReport average_nodal_error(const Eigen::MatrixXd& recovered, const Eigen::MatrixXd& truth,
                                const Eigen::MatrixXd& start) {
  if (recovered.rows() != truth.rows() || recovered.cols() != truth.cols())
    throw Error("recovered and truth positions have different node counts (" +
                std::to_string(recovered.rows()) + " vs " + std::to_string(truth.rows()) + ")");
  if (truth.rows() == 0) throw Error("no nodes to compare");

  ErrorReport report;
  report.count = truth.rows();
  report.per_node = (truth - recovered).rowwise().norm();
  report.mean_abs_error = report.per_node.mean();
  if (start.size() == 0) {
    report.relative_percent = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  if (start.rows() != truth.rows() || start.cols() != truth.cols())
    throw Error("start positions do not match truth positions");
  const double scale = (truth - start).rowwise().norm().mean();
  if (scale > 0.0)
    report.relative_percent = 100.0 * report.mean_abs_error / scale;
  else
    report.relative_percent = report.mean_abs_error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return report;
}

std::string convergence_log(const RecoveryResult& result) {
  std::string out = "iter,sigma2,potential,increment\n";
  for (const IterationRecord& r : result.history) {
    out += std::to_string(r.iteration) + ',' + to_text(r.sigma2) + ',' + to_text(r.potential) + ',' +
           to_text(r.increment) + '\n';
  }
  return out;
}

}  // namespace vbifem

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace frd {

using Index = Eigen::Index;

// Observed triples (running variable, outcome, binary treatment) plus
// optional exogenous covariates (one column each) and optional cluster ids.
struct Sample {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd d;
  Eigen::MatrixXd w;                  // n x q; q == 0 when absent
  std::vector<std::int64_t> cluster;  // empty when absent

  Index n() const { return x.size(); }
  bool has_covariates() const { return w.cols() > 0; }
  bool has_cluster() const { return !cluster.empty(); }

  // Checks the shape invariants and that every d entry is exactly 0 or 1.
  void validate() const;
};

}  // namespace frd

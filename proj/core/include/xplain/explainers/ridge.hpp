#pragma once

#include <Eigen/Dense>

namespace xplain {

// Accumulates the weighted normal equations row by row so callers with very
// many rows (exhaustive coalition enumeration) never materialize the design.
class RidgeAccumulator {
 public:
  // `columns` counts every coefficient, including the intercept if present.
  RidgeAccumulator(Eigen::Index columns, bool intercept_first);

  void add(const Eigen::Ref<const Eigen::VectorXd>& row, double target, double weight);

  // Minimizes sum w_i (y_i - x_i.beta)^2 + lambda * ||beta_penalized||^2 where
  // the intercept column (if any) is unpenalized. Throws rank_deficient when
  // the regularized system is singular.
  Eigen::VectorXd solve(double lambda) const;

  Eigen::Index rows_added() const { return rows_; }
  Eigen::Index positive_weight_rows() const { return positive_rows_; }

 private:
  Eigen::MatrixXd gram_;
  Eigen::VectorXd moment_;
  bool intercept_first_;
  Eigen::Index rows_ = 0;
  Eigen::Index positive_rows_ = 0;
};

// design: N x (M+1) with the intercept in column 0.
Eigen::VectorXd weighted_ridge(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                               const Eigen::VectorXd& weights, double lambda,
                               bool intercept_first = true);

}  // namespace xplain

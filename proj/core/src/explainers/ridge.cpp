#include "xplain/explainers/ridge.hpp"

#include <cmath>
#include <string>

#include "xplain/core/error.hpp"

namespace xplain {

namespace {
constexpr double kMinReciprocalCondition = 1e-13;
}

RidgeAccumulator::RidgeAccumulator(Eigen::Index columns, bool intercept_first)
    : gram_(Eigen::MatrixXd::Zero(columns, columns)),
      moment_(Eigen::VectorXd::Zero(columns)),
      intercept_first_(intercept_first) {
  require(columns >= 1, ErrorCode::invalid_argument, "ridge system needs >= 1 column");
}

void RidgeAccumulator::add(const Eigen::Ref<const Eigen::VectorXd>& row, double target,
                           double weight) {
  require(row.size() == gram_.cols(), ErrorCode::invalid_argument, "ridge row has wrong width");
  require(std::isfinite(weight) && weight >= 0.0, ErrorCode::invalid_argument,
          "ridge weights must be nonnegative");
  require(std::isfinite(target), ErrorCode::invalid_argument, "ridge target is not finite");
  ++rows_;
  if (weight == 0.0) return;
  ++positive_rows_;
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(row, weight);
  moment_.noalias() += (weight * target) * row;
}

Eigen::VectorXd RidgeAccumulator::solve(double lambda) const {
  require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::invalid_argument,
          "ridge lambda must be >= 0");
  const Eigen::Index m = gram_.cols();
  require(rows_ >= m, ErrorCode::invalid_argument,
          "ridge needs at least " + std::to_string(m) + " rows, got " + std::to_string(rows_));
  require(positive_rows_ >= m, ErrorCode::rank_deficient,
          "ridge needs at least " + std::to_string(m) + " positively weighted rows");

  Eigen::MatrixXd system = gram_.selfadjointView<Eigen::Lower>();
  for (Eigen::Index j = intercept_first_ ? 1 : 0; j < m; ++j) system(j, j) += lambda;

  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success || !(llt.rcond() > kMinReciprocalCondition)) {
    fail(ErrorCode::rank_deficient, "weighted least-squares system is rank deficient");
  }
  Eigen::VectorXd beta = llt.solve(moment_);
  require(beta.allFinite(), ErrorCode::rank_deficient, "weighted least-squares solve diverged");
  return beta;
}

Eigen::VectorXd weighted_ridge(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                               const Eigen::VectorXd& weights, double lambda,
                               bool intercept_first) {
  require(design.rows() == targets.size() && design.rows() == weights.size(),
          ErrorCode::invalid_argument, "ridge design, targets and weights differ in length");
  RidgeAccumulator acc(design.cols(), intercept_first);
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    acc.add(design.row(i).transpose(), targets[i], weights[i]);
  }
  return acc.solve(lambda);
}

}  // namespace xplain

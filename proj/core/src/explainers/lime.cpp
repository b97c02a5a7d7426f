#include "xplain/explainers/lime.hpp"

#include <cmath>

#include "target.hpp"
#include "xplain/core/error.hpp"
#include "xplain/core/random.hpp"
#include "xplain/explainers/ridge.hpp"

namespace xplain {

double LimeConfig::width_for(std::size_t units) const {
  return kernel_width.value_or(0.75 * std::sqrt(static_cast<double>(units)));
}

void LimeConfig::validate(std::size_t units) const {
  require(units >= 1, ErrorCode::invalid_argument, "sample has no interpretable units");
  require(num_samples >= 0 && static_cast<std::size_t>(num_samples) >= units + 2,
          ErrorCode::invalid_argument,
          "LIME needs num_samples >= M + 2 = " + std::to_string(units + 2));
  const double width = width_for(units);
  require(std::isfinite(width) && width > 0.0, ErrorCode::invalid_argument,
          "kernel_width must be > 0");
  require(std::isfinite(ridge_lambda) && ridge_lambda >= 0.0, ErrorCode::invalid_argument,
          "ridge_lambda must be >= 0");
}

Attribution lime_explain(const Classifier& model, const Sample& sample, const LimeConfig& config,
                         const Baseline& baseline) {
  const Perturbation perturbation(sample, baseline);
  const std::size_t m = perturbation.unit_count();
  config.validate(m);
  const detail::TargetProbability target(model, sample, config.target);
  const double width = config.width_for(m);

  Rng rng(config.seed, {0x6c696d65u});
  RidgeAccumulator ridge(static_cast<Eigen::Index>(m) + 1, true);
  Eigen::VectorXd row(static_cast<Eigen::Index>(m) + 1);
  UnitMask mask(m, 1);
  std::vector<std::size_t> order(m);
  double full_value = 0.0;

  for (int n = 0; n < config.num_samples; ++n) {
    std::fill(mask.begin(), mask.end(), std::uint8_t{1});
    std::size_t off = 0;
    if (n > 0) {
      // Number of switched-off units uniform in [1, M], then a uniform subset.
      off = 1 + rng.below(m);
      for (std::size_t i = 0; i < m; ++i) order[i] = i;
      for (std::size_t i = 0; i < off; ++i) {
        const std::size_t j = i + rng.below(m - i);
        std::swap(order[i], order[j]);
        mask[order[i]] = 0;
      }
    }
    const double value = target(perturbation.realize(mask));
    if (n == 0) full_value = value;

    const double distance = std::sqrt(static_cast<double>(off)) / std::sqrt(static_cast<double>(m));
    const double weight = std::exp(-(distance * distance) / (width * width));
    row[0] = 1.0;
    for (std::size_t i = 0; i < m; ++i) row[static_cast<Eigen::Index>(i) + 1] = mask[i];
    ridge.add(row, value, weight);
  }
  const Eigen::VectorXd beta = ridge.solve(config.ridge_lambda);

  Attribution out;
  out.method = Method::lime;
  out.target_class = target.label();
  out.unit_kind = perturbation.unit_kind();
  out.units = perturbation.unit_ids();
  out.scores.assign(beta.data() + 1, beta.data() + beta.size());
  out.baseline_value = target(perturbation.realize(UnitMask(m, 0)));
  out.prediction_value = full_value;
  out.seed = config.seed;
  out.diagnostics["intercept"] = beta[0];
  out.diagnostics["kernel_width"] = width;
  out.validate();
  return out;
}

}  // namespace xplain

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "xplain/core/types.hpp"
#include "xplain/explainers/units.hpp"
#include "xplain/models/model.hpp"

namespace xplain {

struct LimeConfig {
  int num_samples = 1000;
  // Defaults to 0.75 * sqrt(M) for M interpretable units.
  std::optional<double> kernel_width;
  double ridge_lambda = 1.0;
  std::uint64_t seed = 0;
  // Defaults to the predicted class of the unperturbed sample.
  std::optional<std::string> target;

  double width_for(std::size_t units) const;
  void validate(std::size_t units) const;
};

// Local surrogate: binary on/off perturbations of the interpretable units,
// realized against `baseline`, weighted by an exponential kernel on the
// normalized distance to the all-on vector and fitted by weighted ridge.
// Scores are the surrogate's slopes.
Attribution lime_explain(const Classifier& model, const Sample& sample, const LimeConfig& config,
                         const Baseline& baseline);

}  // namespace xplain

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xplain/core/types.hpp"
#include "xplain/models/model.hpp"

namespace xplain {

// Relevance of every input coordinate plus the bookkeeping needed to audit
// conservation: logit == input_relevance.sum() + absorbed (up to rounding).
struct RelevanceResult {
  Eigen::VectorXd input_relevance;
  double target_logit = 0.0;
  // Share of relevance kept by biases and epsilon stabilizers, summed over
  // layers. Exactly zero-denominator neurons absorb all of their relevance.
  double absorbed = 0.0;
  std::size_t target_index = 0;
};

// Epsilon-rule propagation of the target logit through `model`'s layers,
// starting from a recorded forward pass.
RelevanceResult propagate_relevance(const MLPModel& model, const ActivationTrace& trace,
                                    std::size_t target_index, double epsilon);

// LRP attribution mapped back to interpretable units: tabular coordinates are
// summed per column, bag-of-words counts are split evenly over the token's
// positions, image channels are summed per segment.
Attribution lrp_explain(const MLPModel& model, const Sample& sample, double epsilon,
                        const std::optional<std::string>& target = std::nullopt);

}  // namespace xplain

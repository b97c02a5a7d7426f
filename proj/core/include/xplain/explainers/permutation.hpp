#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "xplain/core/random.hpp"
#include "xplain/core/types.hpp"
#include "xplain/models/model.hpp"

namespace xplain {

struct GlobalImportance {
  std::vector<std::string> features;
  std::vector<double> importance;             // mean accuracy drop per feature
  std::vector<std::vector<double>> raw_drops;  // [feature][repeat]
  double baseline_score = 0.0;
  int repeats = 0;
  std::uint64_t seed = 0;
};

// Produces the row order used to shuffle one column. Receives the row count
// and the (feature, repeat) stream. The default is a Fisher-Yates shuffle.
using PermutationSource = std::function<std::vector<std::size_t>(std::size_t rows, Rng& rng)>;

struct PermutationConfig {
  int repeats = 5;
  std::uint64_t seed = 0;
  PermutationSource permutation;  // empty = seeded shuffle
};

inline constexpr std::size_t kMinPermutationRows = 10;

// Accuracy drop when one column of a held-out tabular set is shuffled. Every
// (feature, repeat) pair draws from its own stream derived from the seed, so
// the result does not depend on evaluation order.
GlobalImportance permutation_importance(const Classifier& model, const Dataset& holdout,
                                        const PermutationConfig& config);

}  // namespace xplain

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "xplain/core/types.hpp"
#include "xplain/explainers/units.hpp"
#include "xplain/models/model.hpp"

namespace xplain {

// Value of a coalition game; mask[i] != 0 means unit i is in the coalition.
using CoalitionValue = std::function<double(const UnitMask&)>;

inline constexpr int kMaxExactShapleyUnits = 15;
inline constexpr int kMaxKernelEnumerationUnits = 20;

// Brute-force Shapley values over all 2^M coalitions. Marginal contributions
// are summed per coalition size in sorted order, so exchangeable units get
// bit-identical values.
std::vector<double> exact_shapley_values(int units, const CoalitionValue& value);

struct ShapConfig {
  enum class Mode { exact_enumeration, sampled };
  Mode mode = Mode::exact_enumeration;
  int num_coalitions = 2048;
  std::uint64_t seed = 0;
  std::optional<std::string> target;

  void validate(std::size_t units) const;
};

struct KernelShapValues {
  std::vector<double> phi;
  double empty_value = 0.0;
  double full_value = 0.0;
  std::size_t coalitions = 0;
};

// Kernel SHAP on an abstract game. The empty and full coalitions are exact
// constraints: one unit is eliminated through efficiency and the remaining
// weighted least-squares problem is solved without intercept.
KernelShapValues kernel_shapley_values(int units, const CoalitionValue& value,
                                       const ShapConfig& config);

Attribution exact_shapley(const Classifier& model, const Sample& sample, const Baseline& baseline,
                          const std::optional<std::string>& target = std::nullopt);

Attribution kernel_shap(const Classifier& model, const Sample& sample, const Baseline& baseline,
                        const ShapConfig& config);

}  // namespace xplain

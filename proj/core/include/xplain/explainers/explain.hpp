#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xplain/core/types.hpp"
#include "xplain/explainers/lime.hpp"
#include "xplain/explainers/lrp.hpp"
#include "xplain/explainers/permutation.hpp"
#include "xplain/explainers/shapley.hpp"
#include "xplain/explainers/units.hpp"
#include "xplain/models/model.hpp"

namespace xplain {

// Which methods may run for which task kind. The default mirrors the
// platform's scenario matrix: text -> LRP, LIME; image -> LIME, SHAP;
// tabular -> LIME, SHAP, permutation importance. The exact Shapley oracle
// is allowed wherever SHAP is.
class MethodPolicy {
 public:
  static MethodPolicy scenario_default();
  static MethodPolicy allow_all();

  bool allows(TaskKind task, Method method) const;
  std::vector<Method> methods_for(TaskKind task) const;
  void set(TaskKind task, std::set<Method> methods) { allowed_[task] = std::move(methods); }

  bool operator==(const MethodPolicy&) const = default;

 private:
  std::map<TaskKind, std::set<Method>> allowed_;
};

// Units above which SHAP switches from exhaustive enumeration to sampling
// when no mode is requested explicitly.
inline constexpr std::size_t kAutoShapEnumerationLimit = 12;

struct ExplainConfig {
  std::uint64_t seed = 0;
  std::optional<std::string> target;
  LimeConfig lime;
  std::optional<ShapConfig::Mode> shap_mode;
  int shap_coalitions = 2048;
  double lrp_epsilon = 0.01;
  int permutation_repeats = 5;
  MethodPolicy policy = MethodPolicy::scenario_default();
  // Overrides the model's default baseline.
  std::optional<Baseline> baseline;
};

// Throws method_unavailable if `method` cannot run on `model`.
void check_method_available(const Model& model, Method method, const MethodPolicy& policy);

// Instance-level explanation. permutation_importance is model-level and is
// rejected here; use explain_model.
Attribution explain(const Model& model, const Sample& sample, Method method,
                    const ExplainConfig& config);

GlobalImportance explain_model(const Model& model, const Dataset& holdout,
                               const ExplainConfig& config);

}  // namespace xplain

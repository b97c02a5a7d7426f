#include "xplain/explainers/explain.hpp"

#include "xplain/core/error.hpp"

namespace xplain {

MethodPolicy MethodPolicy::scenario_default() {
  MethodPolicy policy;
  policy.set(TaskKind::text, {Method::lrp, Method::lime});
  policy.set(TaskKind::image, {Method::lime, Method::kernel_shap, Method::exact_shapley});
  policy.set(TaskKind::tabular, {Method::lime, Method::kernel_shap, Method::exact_shapley,
                                 Method::permutation_importance});
  return policy;
}

MethodPolicy MethodPolicy::allow_all() {
  MethodPolicy policy;
  const std::set<Method> all{Method::lime, Method::kernel_shap, Method::exact_shapley,
                             Method::lrp, Method::permutation_importance};
  for (TaskKind task : {TaskKind::tabular, TaskKind::text, TaskKind::image}) policy.set(task, all);
  return policy;
}

bool MethodPolicy::allows(TaskKind task, Method method) const {
  auto it = allowed_.find(task);
  return it != allowed_.end() && it->second.count(method) > 0;
}

std::vector<Method> MethodPolicy::methods_for(TaskKind task) const {
  auto it = allowed_.find(task);
  if (it == allowed_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

void check_method_available(const Model& model, Method method, const MethodPolicy& policy) {
  const TaskKind task = as_classifier(model).task();
  if (method == Method::lrp && kind_of(model) != ModelKind::mlp) {
    fail(ErrorCode::method_unavailable,
         "method unavailable for this model kind: lrp needs an mlp model, got " +
             std::string(to_string(kind_of(model))));
  }
  if (method == Method::permutation_importance && task != TaskKind::tabular) {
    fail(ErrorCode::method_unavailable,
         "method unavailable for this model kind: permutation_importance needs a tabular model");
  }
  if (!policy.allows(task, method)) {
    fail(ErrorCode::method_unavailable,
         "method unavailable for this model kind: " + std::string(to_string(method)) +
             " is not enabled for " + std::string(to_string(task)) + " models");
  }
}

Attribution explain(const Model& model, const Sample& sample, Method method,
                    const ExplainConfig& config) {
  check_method_available(model, method, config.policy);
  const Classifier& classifier = as_classifier(model);
  require(task_of(sample) == classifier.task(), ErrorCode::invalid_argument,
          "sample kind '" + std::string(to_string(task_of(sample))) +
              "' does not match model input kind '" +
              std::string(to_string(classifier.task())) + "'");
  const Baseline baseline = config.baseline.value_or(default_baseline(featurizer_of(model)));

  Attribution out;
  switch (method) {
    case Method::lime: {
      LimeConfig lime = config.lime;
      lime.seed = config.seed;
      lime.target = config.target;
      out = lime_explain(classifier, sample, lime, baseline);
      break;
    }
    case Method::kernel_shap: {
      ShapConfig shap;
      shap.seed = config.seed;
      shap.target = config.target;
      shap.num_coalitions = config.shap_coalitions;
      const std::size_t units = Perturbation(sample, baseline).unit_count();
      shap.mode = config.shap_mode.value_or(units <= kAutoShapEnumerationLimit
                                                ? ShapConfig::Mode::exact_enumeration
                                                : ShapConfig::Mode::sampled);
      out = kernel_shap(classifier, sample, baseline, shap);
      break;
    }
    case Method::exact_shapley:
      out = exact_shapley(classifier, sample, baseline, config.target);
      break;
    case Method::lrp:
      out = lrp_explain(std::get<MLPModel>(model), sample, config.lrp_epsilon, config.target);
      break;
    case Method::permutation_importance:
      fail(ErrorCode::invalid_argument,
           "permutation_importance explains whole models, not single samples");
  }
  out.method = method;
  out.seed = config.seed;
  out.validate();
  return out;
}

GlobalImportance explain_model(const Model& model, const Dataset& holdout,
                               const ExplainConfig& config) {
  check_method_available(model, Method::permutation_importance, config.policy);
  PermutationConfig permutation;
  permutation.repeats = config.permutation_repeats;
  permutation.seed = config.seed;
  return permutation_importance(as_classifier(model), holdout, permutation);
}

}  // namespace xplain

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "xplain/core/types.hpp"
#include "xplain/evaluation/agreement.hpp"
#include "xplain/explainers/explain.hpp"
#include "xplain/models/model.hpp"
#include "xplain/models/training.hpp"
#include "xplain/profiler/profile.hpp"

namespace xplain {

using Json = nlohmann::json;

// Compact text with sorted keys and every floating-point number printed with
// 17 significant digits, so equal documents hash equally. Throws data_loss on
// non-finite numbers.
std::string canonical_dump(const Json& document);

// Parses a document, mapping syntax errors to invalid_argument.
Json parse_json(const std::string& text, const std::string& what);

// Throwing accessors with path-precise messages ("models[0]: ...").
const Json& member(const Json& object, const std::string& key, const std::string& path);
std::string string_member(const Json& object, const std::string& key, const std::string& path);

Json to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const Json& document);

Json to_json(const Cell& cell);
Json to_json(const Sample& sample);
// Accepts {"kind":"tabular","values":[...]}, {"kind":"text","text":...} and
// {"kind":"image","height":h,"width":w,"pixels":[r,g,b,...]}.
Sample sample_from_json(const Json& document);

Json to_json(const Prediction& prediction);
Json to_json(const Attribution& attribution);
Attribution attribution_from_json(const Json& document);
Json to_json(const GlobalImportance& importance);
Json to_json(const DatasetProfile& profile);
Json to_json(const AgreementReport& report);

Json to_json(const Featurizer& featurizer);
Featurizer featurizer_from_json(const Json& document);

// Model payload: kind, class labels, featurization state and parameters.
Json to_json(const Model& model);
Model model_from_json(const Json& document);

Json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const Json& document);

// Applies the optional "config" object of an explain request on top of the
// defaults: lime{num_samples,kernel_width,ridge_lambda},
// shap{mode,num_coalitions}, lrp_epsilon, permutation_repeats, target.
ExplainConfig explain_config_from_json(const Json& document, ExplainConfig base = {});

}  // namespace xplain

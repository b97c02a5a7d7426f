#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xplain/core/types.hpp"
#include "xplain/explainers/explain.hpp"
#include "xplain/models/model.hpp"

namespace xplain {

struct AlignedScores {
  std::vector<std::string> units;  // common units, in the first attribution's order
  std::vector<double> a;
  std::vector<double> b;
  std::size_t excluded = 0;  // units present in only one attribution
};

// Pairs the scores of two attributions of the same sample. Throws on a
// unit-kind or target-class mismatch and on an empty intersection.
AlignedScores align_units(const Attribution& a, const Attribution& b);

// Rank correlation with average ranks for ties. Throws if the lengths differ,
// are below 2, or either rank vector is constant.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// The k units with the largest |score|, ties broken by unit identifier.
std::vector<std::string> top_k_by_magnitude(const std::vector<std::string>& units,
                                            const std::vector<double>& scores, std::size_t k);

// Jaccard overlap of the two top-k sets, taken over the common units.
double topk_jaccard(const Attribution& a, const Attribution& b, std::size_t k);

// Fraction of common units whose scores share a sign; zero matches only zero.
double sign_agreement(const Attribution& a, const Attribution& b);

// Share of the human-marked units found among the k highest positive scores.
// Throws if a marked unit does not occur in the attribution.
double plausibility(const Attribution& attribution, const HumanAnnotation& human, std::size_t k);

// min(5, ceil(M / 3)), at least 1.
std::size_t default_top_k(std::size_t unit_count);

struct NamedSample {
  std::string id;
  Sample sample;
};

struct EvaluationScenario {
  std::string id;
  const Model* model = nullptr;
  std::vector<NamedSample> samples;
  std::map<std::string, HumanAnnotation> annotations;  // keyed by sample id
};

struct PairMetrics {
  std::string sample_id;
  std::size_t first = 0;   // index into AgreementReport::methods
  std::size_t second = 0;
  std::size_t common_units = 0;
  std::size_t k = 0;
  std::optional<double> spearman;  // empty when a rank vector is constant
  double topk_jaccard = 0.0;
  double sign_agreement = 0.0;
};

struct MetricSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct PairAggregate {
  std::size_t first = 0;
  std::size_t second = 0;
  MetricSummary spearman;
  MetricSummary topk_jaccard;
  MetricSummary sign_agreement;
};

struct PlausibilityScore {
  std::string sample_id;
  std::size_t method = 0;
  std::size_t k = 0;
  double score = 0.0;
};

struct SkippedRun {
  std::string sample_id;  // empty when the method was skipped for the whole scenario
  std::string method;
  std::string reason;
};

struct AgreementReport {
  std::string scenario_id;
  std::string target_policy = "predicted_class";
  std::vector<std::string> methods;  // evaluated methods, in request order
  std::optional<std::size_t> requested_k;
  std::uint64_t seed = 0;
  std::vector<PairMetrics> pairs;
  std::vector<PairAggregate> aggregates;
  std::vector<PlausibilityScore> plausibility;
  std::size_t samples_total = 0;
  std::size_t samples_evaluated = 0;
  std::vector<SkippedRun> skipped;
};

// Runs every requested method the policy allows on each scenario sample and
// compares all method pairs. The same method may be listed twice. Throws
// failed_precondition when fewer than two methods can run.
AgreementReport agreement_report(const EvaluationScenario& scenario,
                                 const std::vector<Method>& methods,
                                 std::optional<std::size_t> k, const ExplainConfig& config);

}  // namespace xplain

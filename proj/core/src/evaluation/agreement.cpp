#include "xplain/evaluation/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "xplain/core/error.hpp"

namespace xplain {

AlignedScores align_units(const Attribution& a, const Attribution& b) {
  require(a.unit_kind == b.unit_kind, ErrorCode::invalid_argument,
          "unit kind mismatch: " + std::string(to_string(a.unit_kind)) + " vs " +
              std::string(to_string(b.unit_kind)));
  require(a.target_class == b.target_class, ErrorCode::invalid_argument,
          "target class mismatch: " + a.target_class + " vs " + b.target_class);
  a.validate();
  b.validate();
  std::unordered_map<std::string, std::size_t> index_b;
  for (std::size_t i = 0; i < b.units.size(); ++i) index_b.emplace(b.units[i], i);

  AlignedScores out;
  for (std::size_t i = 0; i < a.units.size(); ++i) {
    auto it = index_b.find(a.units[i]);
    if (it == index_b.end()) continue;
    out.units.push_back(a.units[i]);
    out.a.push_back(a.scores[i]);
    out.b.push_back(b.scores[it->second]);
  }
  require(!out.units.empty(), ErrorCode::invalid_argument, "no common units");
  out.excluded = a.units.size() + b.units.size() - 2 * out.units.size();
  return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size(), ErrorCode::invalid_argument, "spearman: length mismatch");
  require(a.size() >= 2, ErrorCode::invalid_argument, "spearman needs at least 2 values");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  // Average ranks always have mean (n + 1) / 2.
  const double mean = 0.5 * static_cast<double>(a.size() + 1);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  require(saa > 0.0 && sbb > 0.0, ErrorCode::failed_precondition,
          "spearman undefined: constant ranks");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<std::string> top_k_by_magnitude(const std::vector<std::string>& units,
                                            const std::vector<double>& scores, std::size_t k) {
  require(units.size() == scores.size(), ErrorCode::invalid_argument, "units/scores mismatch");
  require(k >= 1 && k <= units.size(), ErrorCode::invalid_argument,
          "k must be in [1, " + std::to_string(units.size()) + "], got " + std::to_string(k));
  std::vector<std::size_t> order(units.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const double ax = std::abs(scores[x]);
    const double ay = std::abs(scores[y]);
    if (ax != ay) return ax > ay;
    return units[x] < units[y];
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(units[order[i]]);
  return out;
}

namespace {

double jaccard_of(const AlignedScores& aligned, std::size_t k) {
  auto ta = top_k_by_magnitude(aligned.units, aligned.a, k);
  auto tb = top_k_by_magnitude(aligned.units, aligned.b, k);
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  std::vector<std::string> both;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(both));
  const std::size_t uni = ta.size() + tb.size() - both.size();
  return static_cast<double>(both.size()) / static_cast<double>(uni);
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

double sign_agreement_of(const AlignedScores& aligned) {
  std::size_t same = 0;
  for (std::size_t i = 0; i < aligned.a.size(); ++i) {
    if (sign_of(aligned.a[i]) == sign_of(aligned.b[i])) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(aligned.a.size());
}

}  // namespace

double topk_jaccard(const Attribution& a, const Attribution& b, std::size_t k) {
  return jaccard_of(align_units(a, b), k);
}

double sign_agreement(const Attribution& a, const Attribution& b) {
  return sign_agreement_of(align_units(a, b));
}

double plausibility(const Attribution& attribution, const HumanAnnotation& human, std::size_t k) {
  attribution.validate();
  require(k >= 1, ErrorCode::invalid_argument, "k must be >= 1");
  require(!human.relevant_units.empty(), ErrorCode::invalid_argument,
          "annotation for " + human.sample_id + " marks no units");
  for (const auto& unit : human.relevant_units) {
    require(std::find(attribution.units.begin(), attribution.units.end(), unit) !=
                attribution.units.end(),
            ErrorCode::invalid_argument,
            "annotation for " + human.sample_id + " names unknown unit " + unit);
  }
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < attribution.scores.size(); ++i) {
    if (attribution.scores[i] > 0.0) positive.push_back(i);
  }
  std::sort(positive.begin(), positive.end(), [&](std::size_t x, std::size_t y) {
    if (attribution.scores[x] != attribution.scores[y])
      return attribution.scores[x] > attribution.scores[y];
    return attribution.units[x] < attribution.units[y];
  });
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(k, positive.size()); ++i) {
    hits += human.relevant_units.count(attribution.units[positive[i]]);
  }
  return static_cast<double>(hits) / static_cast<double>(human.relevant_units.size());
}

std::size_t default_top_k(std::size_t unit_count) {
  const std::size_t third = (unit_count + 2) / 3;
  return std::max<std::size_t>(1, std::min<std::size_t>(5, third));
}

namespace {

void accumulate(MetricSummary& summary, double value) {
  if (summary.count == 0) {
    summary.min = value;
    summary.max = value;
  } else {
    summary.min = std::min(summary.min, value);
    summary.max = std::max(summary.max, value);
  }
  summary.mean += value;  // holds the sum until finalize
  ++summary.count;
}

void finalize(MetricSummary& summary) {
  if (summary.count > 0) summary.mean /= static_cast<double>(summary.count);
}

}  // namespace

AgreementReport agreement_report(const EvaluationScenario& scenario,
                                 const std::vector<Method>& methods,
                                 std::optional<std::size_t> k, const ExplainConfig& config) {
  require(scenario.model != nullptr, ErrorCode::invalid_argument, "scenario has no model");
  require(!scenario.samples.empty(), ErrorCode::invalid_argument,
          "scenario " + scenario.id + " has no samples");
  require(!k || *k >= 1, ErrorCode::invalid_argument, "k must be >= 1");
  const Model& model = *scenario.model;

  AgreementReport report;
  report.scenario_id = scenario.id;
  report.requested_k = k;
  report.seed = config.seed;
  report.samples_total = scenario.samples.size();

  std::vector<Method> runnable;
  for (Method method : methods) {
    if (method == Method::permutation_importance) {
      report.skipped.push_back(
          {"", std::string(to_string(method)), "model-level method has no per-sample attribution"});
      continue;
    }
    try {
      check_method_available(model, method, config.policy);
    } catch (const Error& e) {
      report.skipped.push_back({"", std::string(to_string(method)), e.what()});
      continue;
    }
    runnable.push_back(method);
    report.methods.emplace_back(to_string(method));
  }
  require(runnable.size() >= 2, ErrorCode::failed_precondition,
          "no applicable method pair for scenario " + scenario.id);

  const std::size_t m = runnable.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) report.aggregates.push_back({i, j, {}, {}, {}});
  }

  for (const auto& named : scenario.samples) {
    std::vector<std::optional<Attribution>> runs(m);
    std::size_t succeeded = 0;
    for (std::size_t i = 0; i < m; ++i) {
      try {
        runs[i] = explain(model, named.sample, runnable[i], config);
        ++succeeded;
      } catch (const Error& e) {
        report.skipped.push_back({named.id, report.methods[i], e.what()});
      }
    }
    if (succeeded < 2) continue;
    ++report.samples_evaluated;

    std::size_t pair_index = 0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j, ++pair_index) {
        if (!runs[i] || !runs[j]) continue;
        const AlignedScores aligned = align_units(*runs[i], *runs[j]);
        PairMetrics metrics;
        metrics.sample_id = named.id;
        metrics.first = i;
        metrics.second = j;
        metrics.common_units = aligned.units.size();
        metrics.k = std::min(k.value_or(default_top_k(aligned.units.size())),
                             aligned.units.size());
        if (aligned.units.size() >= 2) {
          try {
            metrics.spearman = spearman(aligned.a, aligned.b);
          } catch (const Error&) {
            metrics.spearman = std::nullopt;
          }
        }
        metrics.topk_jaccard = jaccard_of(aligned, metrics.k);
        metrics.sign_agreement = sign_agreement_of(aligned);

        PairAggregate& agg = report.aggregates[pair_index];
        if (metrics.spearman) accumulate(agg.spearman, *metrics.spearman);
        accumulate(agg.topk_jaccard, metrics.topk_jaccard);
        accumulate(agg.sign_agreement, metrics.sign_agreement);
        report.pairs.push_back(std::move(metrics));
      }
    }

    auto annotation = scenario.annotations.find(named.id);
    if (annotation == scenario.annotations.end()) continue;
    for (std::size_t i = 0; i < m; ++i) {
      if (!runs[i]) continue;
      const std::size_t kk = k.value_or(default_top_k(runs[i]->units.size()));
      report.plausibility.push_back(
          {named.id, i, kk, plausibility(*runs[i], annotation->second, kk)});
    }
  }

  for (auto& agg : report.aggregates) {
    finalize(agg.spearman);
    finalize(agg.topk_jaccard);
    finalize(agg.sign_agreement);
  }
  return report;
}

}  // namespace xplain

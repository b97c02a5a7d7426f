#include "xplain/explainers/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "target.hpp"
#include "xplain/core/error.hpp"
#include "xplain/core/random.hpp"
#include "xplain/explainers/ridge.hpp"

namespace xplain {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return std::round(result);
}

UnitMask mask_from_bits(std::uint64_t bits, int units) {
  UnitMask mask(static_cast<std::size_t>(units));
  for (int i = 0; i < units; ++i) mask[i] = (bits >> i) & 1u;
  return mask;
}

// Shapley kernel weight of an interior coalition of the given size.
double kernel_weight(int units, int size) {
  return (units - 1) / (binomial(units, size) * size * (units - size));
}

}  // namespace

std::vector<double> exact_shapley_values(int units, const CoalitionValue& value) {
  require(units >= 1, ErrorCode::invalid_argument, "Shapley values need >= 1 unit");
  require(units <= kMaxExactShapleyUnits, ErrorCode::invalid_argument,
          "exact Shapley enumeration supports at most " +
              std::to_string(kMaxExactShapleyUnits) + " units, got " + std::to_string(units));
  const std::uint64_t total = std::uint64_t{1} << units;
  std::vector<double> values(total);
  for (std::uint64_t bits = 0; bits < total; ++bits) values[bits] = value(mask_from_bits(bits, units));

  std::vector<double> phi(static_cast<std::size_t>(units), 0.0);
  std::vector<std::vector<double>> by_size(static_cast<std::size_t>(units));
  for (int i = 0; i < units; ++i) {
    for (auto& terms : by_size) terms.clear();
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      if (bits & bit) continue;
      by_size[static_cast<std::size_t>(std::popcount(bits))].push_back(values[bits | bit] -
                                                                       values[bits]);
    }
    double sum = 0.0;
    for (int size = 0; size < units; ++size) {
      auto& terms = by_size[static_cast<std::size_t>(size)];
      std::sort(terms.begin(), terms.end());
      double size_sum = 0.0;
      for (double t : terms) size_sum += t;
      // |S|! (M-|S|-1)! / M! = 1 / (M * C(M-1, |S|))
      sum += size_sum / (units * binomial(units - 1, size));
    }
    phi[static_cast<std::size_t>(i)] = sum;
  }
  return phi;
}

void ShapConfig::validate(std::size_t units) const {
  require(units >= 1, ErrorCode::invalid_argument, "sample has no interpretable units");
  if (mode == Mode::exact_enumeration) {
    require(units <= static_cast<std::size_t>(kMaxKernelEnumerationUnits),
            ErrorCode::invalid_argument,
            "exact enumeration supports at most " + std::to_string(kMaxKernelEnumerationUnits) +
                " units, got " + std::to_string(units) + "; use sampled mode");
  } else {
    require(num_coalitions >= 0 && static_cast<std::size_t>(num_coalitions) >= units + 2,
            ErrorCode::invalid_argument,
            "sampled Kernel SHAP needs num_coalitions >= M + 2 = " + std::to_string(units + 2));
  }
}

KernelShapValues kernel_shapley_values(int units, const CoalitionValue& value,
                                       const ShapConfig& config) {
  config.validate(static_cast<std::size_t>(std::max(units, 0)));
  const auto m = static_cast<std::size_t>(units);
  KernelShapValues out;
  out.empty_value = value(UnitMask(m, 0));
  out.full_value = value(UnitMask(m, 1));
  const double delta = out.full_value - out.empty_value;
  if (units == 1) {
    out.phi = {delta};
    return out;
  }

  // phi_last = delta - sum(phi_j), so for a coalition z:
  //   v(z) - v(0) - z_last * delta = sum_{j<last} phi_j (z_j - z_last)
  const Eigen::Index free = units - 1;
  RidgeAccumulator ridge(free, false);
  Eigen::VectorXd row(free);
  auto add = [&](const UnitMask& z, double weight) {
    const double last = z[m - 1];
    for (Eigen::Index j = 0; j < free; ++j) row[j] = z[static_cast<std::size_t>(j)] - last;
    ridge.add(row, value(z) - out.empty_value - last * delta, weight);
    ++out.coalitions;
  };

  if (config.mode == ShapConfig::Mode::exact_enumeration) {
    const std::uint64_t total = std::uint64_t{1} << units;
    for (std::uint64_t bits = 1; bits + 1 < total; ++bits) {
      add(mask_from_bits(bits, units), kernel_weight(units, std::popcount(bits)));
    }
  } else {
    // Coalition sizes drawn with probability proportional to the total kernel
    // mass of that size, C(M,s) * pi(s) ∝ 1 / (s (M - s)); members uniform.
    std::vector<double> cumulative;
    double mass = 0.0;
    for (int s = 1; s < units; ++s) {
      mass += 1.0 / (static_cast<double>(s) * (units - s));
      cumulative.push_back(mass);
    }
    Rng rng(config.seed, {0x6b736870u});
    std::vector<std::size_t> order(m);
    UnitMask z(m);
    for (int n = 0; n < config.num_coalitions; ++n) {
      const double u = rng.uniform() * mass;
      const auto pick = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
      const std::size_t size = std::min<std::size_t>(static_cast<std::size_t>(pick) + 1, m - 1);
      std::fill(z.begin(), z.end(), std::uint8_t{0});
      for (std::size_t i = 0; i < m; ++i) order[i] = i;
      for (std::size_t i = 0; i < size; ++i) {
        const std::size_t j = i + rng.below(m - i);
        std::swap(order[i], order[j]);
        z[order[i]] = 1;
      }
      add(z, 1.0);
    }
  }

  const Eigen::VectorXd solved = ridge.solve(0.0);
  out.phi.assign(solved.data(), solved.data() + solved.size());
  double assigned = 0.0;
  for (double p : out.phi) assigned += p;
  out.phi.push_back(delta - assigned);
  return out;
}

namespace {

Attribution shapley_attribution(Method method, const Perturbation& perturbation,
                                const detail::TargetProbability& target, std::vector<double> phi,
                                double empty_value, double full_value) {
  Attribution out;
  out.method = method;
  out.target_class = target.label();
  out.unit_kind = perturbation.unit_kind();
  out.units = perturbation.unit_ids();
  out.scores = std::move(phi);
  out.baseline_value = empty_value;
  out.prediction_value = full_value;
  double total = 0.0;
  for (double s : out.scores) total += s;
  out.diagnostics["efficiency_gap"] = total - (full_value - empty_value);
  out.validate();
  return out;
}

}  // namespace

Attribution exact_shapley(const Classifier& model, const Sample& sample, const Baseline& baseline,
                          const std::optional<std::string>& target_class) {
  const Perturbation perturbation(sample, baseline);
  const int units = static_cast<int>(perturbation.unit_count());
  require(units >= 1, ErrorCode::invalid_argument, "sample has no interpretable units");
  const detail::TargetProbability target(model, sample, target_class);
  auto value = [&](const UnitMask& mask) { return target(perturbation.realize(mask)); };
  std::vector<double> phi = exact_shapley_values(units, value);
  const auto m = static_cast<std::size_t>(units);
  return shapley_attribution(Method::exact_shapley, perturbation, target, std::move(phi),
                             value(UnitMask(m, 0)), value(UnitMask(m, 1)));
}

Attribution kernel_shap(const Classifier& model, const Sample& sample, const Baseline& baseline,
                        const ShapConfig& config) {
  const Perturbation perturbation(sample, baseline);
  const int units = static_cast<int>(perturbation.unit_count());
  config.validate(static_cast<std::size_t>(units));
  const detail::TargetProbability target(model, sample, config.target);
  auto value = [&](const UnitMask& mask) { return target(perturbation.realize(mask)); };
  KernelShapValues result = kernel_shapley_values(units, value, config);
  Attribution out = shapley_attribution(Method::kernel_shap, perturbation, target,
                                        std::move(result.phi), result.empty_value,
                                        result.full_value);
  out.seed = config.seed;
  out.diagnostics["coalitions"] = static_cast<double>(result.coalitions);
  return out;
}

}  // namespace xplain

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "xplain/core/text.hpp"
#include "xplain/core/types.hpp"
#include "xplain/models/featurizer.hpp"

namespace xplain {

// Reference input that stands in for "unit absent".
struct TabularMeans {
  std::vector<std::string> columns;
  std::vector<Cell> values;  // training means (numeric) / modes
};
struct TextRemoval {};
struct ImageMeanColor {
  Rgb color;
  int grid_rows = 4;
  int grid_cols = 4;
};
using Baseline = std::variant<TabularMeans, TextRemoval, ImageMeanColor>;

// The baseline matching a model's featurization.
Baseline default_baseline(const Featurizer& featurizer);

// On/off mask over interpretable units; 1 keeps the unit's true value.
using UnitMask = std::vector<std::uint8_t>;

// Splits a sample into interpretable units (features, token occurrences or
// grid segments) and realizes masked variants against a baseline.
class Perturbation {
 public:
  Perturbation(const Sample& sample, const Baseline& baseline);

  std::size_t unit_count() const { return unit_ids_.size(); }
  const std::vector<std::string>& unit_ids() const { return unit_ids_; }
  UnitKind unit_kind() const { return unit_kind_; }

  Sample realize(const UnitMask& mask) const;
  Sample realize_bits(std::uint64_t bits) const;

 private:
  Sample sample_;
  Baseline baseline_;
  UnitKind unit_kind_ = UnitKind::feature;
  std::vector<std::string> unit_ids_;
  std::vector<Token> tokens_;
  std::vector<int> segment_of_pixel_;
};

}  // namespace xplain

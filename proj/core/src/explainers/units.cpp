#include "xplain/explainers/units.hpp"

#include "xplain/core/error.hpp"
#include "xplain/core/image.hpp"

namespace xplain {

Baseline default_baseline(const Featurizer& featurizer) {
  switch (featurizer.task()) {
    case TaskKind::tabular: {
      const auto& state = featurizer.tabular_state();
      TabularMeans means;
      for (const Column& column : state.schema.columns()) means.columns.push_back(column.name);
      means.values = state.fill;
      return means;
    }
    case TaskKind::text: return TextRemoval{};
    case TaskKind::image: {
      const auto& state = featurizer.image_state();
      return ImageMeanColor{state.mean_color, state.grid_rows, state.grid_cols};
    }
  }
  fail(ErrorCode::internal, "unreachable task kind");
}

Perturbation::Perturbation(const Sample& sample, const Baseline& baseline)
    : sample_(sample), baseline_(baseline) {
  switch (task_of(sample)) {
    case TaskKind::tabular: {
      const auto* means = std::get_if<TabularMeans>(&baseline);
      require(means != nullptr, ErrorCode::invalid_argument,
              "tabular samples need a tabular-means baseline");
      const auto& row = std::get<TabularSample>(sample);
      require(means->columns.size() == means->values.size() &&
                  row.values.size() == means->values.size(),
              ErrorCode::invalid_argument, "baseline width does not match the sample");
      for (const Cell& cell : row.values) {
        require(!is_missing(cell), ErrorCode::invalid_argument,
                "explainers require complete rows");
      }
      unit_kind_ = UnitKind::feature;
      unit_ids_ = means->columns;
      break;
    }
    case TaskKind::text: {
      require(std::holds_alternative<TextRemoval>(baseline), ErrorCode::invalid_argument,
              "text samples need the token-removal baseline");
      unit_kind_ = UnitKind::token;
      tokens_ = tokenize(std::get<TextSample>(sample).raw);
      for (const Token& token : tokens_) unit_ids_.push_back(token_unit_id(token));
      break;
    }
    case TaskKind::image: {
      const auto* fill = std::get_if<ImageMeanColor>(&baseline);
      require(fill != nullptr, ErrorCode::invalid_argument,
              "image samples need a mean-color baseline");
      const SegmentMap map =
          segment_grid(std::get<ImageSample>(sample), fill->grid_rows, fill->grid_cols);
      segment_of_pixel_ = map.assignment;
      unit_kind_ = UnitKind::segment;
      for (int s = 0; s < map.segment_count(); ++s) unit_ids_.push_back(segment_unit_id(s));
      break;
    }
  }
}

Sample Perturbation::realize(const UnitMask& mask) const {
  require(mask.size() == unit_ids_.size(), ErrorCode::internal, "unit mask has wrong length");
  switch (task_of(sample_)) {
    case TaskKind::tabular: {
      TabularSample row = std::get<TabularSample>(sample_);
      const auto& means = std::get<TabularMeans>(baseline_);
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) row.values[i] = means.values[i];
      }
      return row;
    }
    case TaskKind::text: {
      std::vector<Token> kept;
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) kept.push_back(tokens_[i]);
      }
      return TextSample{join_tokens(kept)};
    }
    case TaskKind::image: {
      ImageSample image = std::get<ImageSample>(sample_);
      const Rgb color = std::get<ImageMeanColor>(baseline_).color;
      auto& pixels = image.pixels();
      for (std::size_t p = 0; p < pixels.size(); ++p) {
        if (!mask[static_cast<std::size_t>(segment_of_pixel_[p])]) pixels[p] = color;
      }
      return image;
    }
  }
  fail(ErrorCode::internal, "unreachable task kind");
}

Sample Perturbation::realize_bits(std::uint64_t bits) const {
  UnitMask mask(unit_ids_.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = (bits >> i) & 1u;
  return realize(mask);
}

}  // namespace xplain

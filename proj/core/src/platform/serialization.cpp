#include "xplain/platform/serialization.hpp"

#include <cmath>
#include <cstdio>

#include "xplain/core/error.hpp"

namespace xplain {

namespace {

void dump_into(const Json& value, std::string& out) {
  switch (value.type()) {
    case Json::value_t::object: {
      out.push_back('{');
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        out += Json(it.key()).dump(-1, ' ', false, Json::error_handler_t::replace);
        out.push_back(':');
        dump_into(it.value(), out);
      }
      out.push_back('}');
      break;
    }
    case Json::value_t::array: {
      out.push_back('[');
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) out.push_back(',');
        dump_into(value[i], out);
      }
      out.push_back(']');
      break;
    }
    case Json::value_t::number_float: {
      const double x = value.get<double>();
      require(std::isfinite(x), ErrorCode::data_loss, "cannot serialize a non-finite number");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      break;
    }
    default:
      out += value.dump(-1, ' ', false, Json::error_handler_t::replace);
  }
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

double number_at(const Json& value, const std::string& path) {
  require(value.is_number(), ErrorCode::invalid_argument, path + ": expected a number");
  return value.get<double>();
}

std::int64_t integer_at(const Json& value, const std::string& path) {
  require(value.is_number_integer(), ErrorCode::invalid_argument, path + ": expected an integer");
  return value.get<std::int64_t>();
}

const Json& array_member(const Json& object, const std::string& key, const std::string& path) {
  const Json& value = member(object, key, path);
  require(value.is_array(), ErrorCode::invalid_argument, path + "." + key + ": expected an array");
  return value;
}

Eigen::VectorXd vector_from_json(const Json& value, const std::string& path) {
  require(value.is_array(), ErrorCode::invalid_argument, path + ": expected an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number_at(value[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

Eigen::MatrixXd matrix_from_json(const Json& value, const std::string& path) {
  require(value.is_array(), ErrorCode::invalid_argument, path + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(value.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(value[0].size());
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    const Json& row = value[static_cast<std::size_t>(r)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols,
            ErrorCode::invalid_argument, row_path + ": expected " + std::to_string(cols) + " values");
    for (Eigen::Index c = 0; c < cols; ++c) {
      out(r, c) = number_at(row[static_cast<std::size_t>(c)],
                            row_path + "[" + std::to_string(c) + "]");
    }
  }
  return out;
}

std::vector<std::string> strings_from_json(const Json& value, const std::string& path) {
  require(value.is_array(), ErrorCode::invalid_argument, path + ": expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    require(value[i].is_string(), ErrorCode::invalid_argument,
            path + "[" + std::to_string(i) + "]: expected a string");
    out.push_back(value[i].get<std::string>());
  }
  return out;
}

Cell cell_from_json(const Json& value, const std::string& path) {
  if (value.is_null()) return std::monostate{};
  if (value.is_number()) return value.get<double>();
  if (value.is_boolean()) return value.get<bool>() ? 1.0 : 0.0;
  if (value.is_string()) return value.get<std::string>();
  fail(ErrorCode::invalid_argument, path + ": expected null, a number or a string");
}

Json optional_number(const std::optional<double>& value) {
  return value ? Json(*value) : Json(nullptr);
}

Json summary_to_json(const MetricSummary& s) {
  if (s.count == 0) return {{"count", 0}, {"mean", nullptr}, {"min", nullptr}, {"max", nullptr}};
  return {{"count", s.count}, {"mean", s.mean}, {"min", s.min}, {"max", s.max}};
}

}  // namespace

std::string canonical_dump(const Json& document) {
  std::string out;
  dump_into(document, out);
  return out;
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::invalid_argument, what + ": malformed document: " + e.what());
  }
}

const Json& member(const Json& object, const std::string& key, const std::string& path) {
  require(object.is_object(), ErrorCode::invalid_argument,
          (path.empty() ? std::string("document") : path) + ": expected an object");
  auto it = object.find(key);
  require(it != object.end(), ErrorCode::invalid_argument,
          (path.empty() ? key : path + "." + key) + ": missing field");
  return *it;
}

std::string string_member(const Json& object, const std::string& key, const std::string& path) {
  const Json& value = member(object, key, path);
  require(value.is_string(), ErrorCode::invalid_argument,
          (path.empty() ? key : path + "." + key) + ": expected a string");
  return value.get<std::string>();
}

Json to_json(const FeatureSchema& schema) {
  Json columns = Json::array();
  for (const auto& c : schema.columns()) {
    Json col{{"name", c.name}, {"kind", std::string(to_string(c.kind))}};
    if (c.kind == ColumnKind::categorical) col["categories"] = c.categories;
    columns.push_back(std::move(col));
  }
  return {{"columns", columns}};
}

FeatureSchema schema_from_json(const Json& document) {
  const Json& columns = array_member(document, "columns", "schema");
  std::vector<Column> out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const std::string path = "schema.columns[" + std::to_string(i) + "]";
    Column c;
    c.name = string_member(columns[i], "name", path);
    c.kind = parse_column_kind(string_member(columns[i], "kind", path));
    if (c.kind == ColumnKind::categorical) {
      c.categories = strings_from_json(member(columns[i], "categories", path), path + ".categories");
    }
    out.push_back(std::move(c));
  }
  return FeatureSchema(std::move(out));
}

Json to_json(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) return std::get<double>(cell);
  if (std::holds_alternative<std::string>(cell)) return std::get<std::string>(cell);
  return nullptr;
}

Json to_json(const Sample& sample) {
  if (const auto* t = std::get_if<TabularSample>(&sample)) {
    Json values = Json::array();
    for (const auto& cell : t->values) values.push_back(to_json(cell));
    return {{"kind", "tabular"}, {"values", values}};
  }
  if (const auto* t = std::get_if<TextSample>(&sample)) {
    return {{"kind", "text"}, {"text", t->raw}};
  }
  const auto& image = std::get<ImageSample>(sample);
  std::vector<int> pixels;
  pixels.reserve(image.pixels().size() * 3);
  for (const auto& p : image.pixels()) {
    pixels.push_back(p.r);
    pixels.push_back(p.g);
    pixels.push_back(p.b);
  }
  return {{"kind", "image"}, {"height", image.height()}, {"width", image.width()},
          {"pixels", pixels}};
}

Sample sample_from_json(const Json& document) {
  const TaskKind kind = parse_task_kind(string_member(document, "kind", "sample"));
  switch (kind) {
    case TaskKind::tabular: {
      const Json& values = array_member(document, "values", "sample");
      TabularSample out;
      for (std::size_t i = 0; i < values.size(); ++i) {
        out.values.push_back(cell_from_json(values[i], "sample.values[" + std::to_string(i) + "]"));
      }
      return out;
    }
    case TaskKind::text:
      return TextSample{string_member(document, "text", "sample")};
    case TaskKind::image: {
      const auto h = integer_at(member(document, "height", "sample"), "sample.height");
      const auto w = integer_at(member(document, "width", "sample"), "sample.width");
      const Json& pixels = array_member(document, "pixels", "sample");
      require(h >= 1 && w >= 1 && static_cast<std::int64_t>(pixels.size()) == 3 * h * w,
              ErrorCode::invalid_argument, "sample.pixels: expected 3 * height * width values");
      std::vector<Rgb> rgb(static_cast<std::size_t>(h * w));
      for (std::size_t i = 0; i < pixels.size(); ++i) {
        const auto v = integer_at(pixels[i], "sample.pixels[" + std::to_string(i) + "]");
        require(v >= 0 && v <= 255, ErrorCode::invalid_argument,
                "sample.pixels[" + std::to_string(i) + "]: channel out of range");
        auto& p = rgb[i / 3];
        (i % 3 == 0 ? p.r : i % 3 == 1 ? p.g : p.b) = static_cast<std::uint8_t>(v);
      }
      return ImageSample(static_cast<int>(h), static_cast<int>(w), std::move(rgb));
    }
  }
  fail(ErrorCode::internal, "unreachable");
}

Json to_json(const Prediction& prediction) {
  return {{"class_labels", prediction.class_labels()},
          {"probabilities", prediction.probabilities()},
          {"predicted_index", prediction.predicted_index()},
          {"predicted_label", prediction.predicted_label()}};
}

Json to_json(const Attribution& a) {
  Json diagnostics = Json::object();
  for (const auto& [key, value] : a.diagnostics) diagnostics[key] = value;
  return {{"method", std::string(to_string(a.method))},
          {"target_class", a.target_class},
          {"unit_kind", std::string(to_string(a.unit_kind))},
          {"units", a.units},
          {"scores", a.scores},
          {"baseline_value", optional_number(a.baseline_value)},
          {"prediction_value", a.prediction_value},
          {"seed", a.seed ? Json(*a.seed) : Json(nullptr)},
          {"diagnostics", diagnostics}};
}

Attribution attribution_from_json(const Json& document) {
  const std::string path = "attribution";
  Attribution a;
  a.method = parse_method(string_member(document, "method", path));
  a.target_class = string_member(document, "target_class", path);
  a.unit_kind = parse_unit_kind(string_member(document, "unit_kind", path));
  a.units = strings_from_json(member(document, "units", path), path + ".units");
  const Json& scores = array_member(document, "scores", path);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    a.scores.push_back(number_at(scores[i], path + ".scores[" + std::to_string(i) + "]"));
  }
  if (auto it = document.find("baseline_value"); it != document.end() && !it->is_null()) {
    a.baseline_value = number_at(*it, path + ".baseline_value");
  }
  a.prediction_value = number_at(member(document, "prediction_value", path), path + ".prediction_value");
  if (auto it = document.find("seed"); it != document.end() && !it->is_null()) {
    require(it->is_number_unsigned(), ErrorCode::invalid_argument, path + ".seed: expected an unsigned integer");
    a.seed = it->get<std::uint64_t>();
  }
  if (auto it = document.find("diagnostics"); it != document.end()) {
    for (auto d = it->begin(); d != it->end(); ++d) {
      a.diagnostics[d.key()] = number_at(d.value(), path + ".diagnostics." + d.key());
    }
  }
  a.validate();
  return a;
}

Json to_json(const GlobalImportance& g) {
  return {{"method", "permutation_importance"},
          {"features", g.features},
          {"importance", g.importance},
          {"raw_drops", g.raw_drops},
          {"baseline_score", g.baseline_score},
          {"score", "accuracy"},
          {"repeats", g.repeats},
          {"seed", g.seed}};
}

Json to_json(const DatasetProfile& p) {
  Json columns = Json::array();
  for (const auto& c : p.columns) {
    Json col{{"name", c.name},
             {"inferred_kind", c.inferred_kind ? Json(std::string(to_string(*c.inferred_kind)))
                                               : Json(nullptr)},
             {"count", c.count},
             {"missing_count", c.missing_count},
             {"distinct_count", c.distinct_count}};
    if (c.numeric) {
      col["numeric"] = {{"min", c.numeric->min},   {"max", c.numeric->max},
                        {"mean", c.numeric->mean}, {"std", c.numeric->std},
                        {"q1", c.numeric->q1},     {"q2", c.numeric->q2},
                        {"q3", c.numeric->q3}};
    } else {
      col["numeric"] = nullptr;
    }
    Json bins = Json::array();
    const bool numeric = c.inferred_kind == ColumnKind::numeric;
    for (const auto& b : c.histogram) {
      Json bin{{"label", b.label}, {"count", b.count}};
      if (numeric) {
        bin["lower"] = b.lower;
        bin["upper"] = b.upper;
      }
      bins.push_back(std::move(bin));
    }
    col["histogram"] = bins;
    columns.push_back(std::move(col));
  }
  Json warnings = Json::array();
  for (const auto& w : p.warnings) {
    warnings.push_back({{"column", w.column}, {"kind", std::string(to_string(w.kind))},
                        {"detail", w.detail}});
  }
  Json values = Json::array();
  for (const auto& row : p.correlation.values) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(optional_number(v));
    values.push_back(std::move(r));
  }
  Json excluded = Json::array();
  for (const auto& [column, reason] : p.correlation.excluded) {
    excluded.push_back({{"column", column}, {"reason", reason}});
  }
  return {{"row_count", p.row_count},
          {"columns", columns},
          {"warnings", warnings},
          {"correlation",
           {{"method", p.correlation.method},
            {"columns", p.correlation.columns},
            {"values", values},
            {"excluded", excluded}}},
          {"options",
           {{"missing_threshold", p.options.missing_threshold},
            {"cardinality_threshold", p.options.cardinality_threshold},
            {"histogram_bins", p.options.histogram_bins},
            {"top_values", p.options.top_values}}}};
}

Json to_json(const AgreementReport& r) {
  Json pairs = Json::array();
  for (const auto& m : r.pairs) {
    pairs.push_back({{"sample_id", m.sample_id},
                     {"first", m.first},
                     {"second", m.second},
                     {"methods", {r.methods[m.first], r.methods[m.second]}},
                     {"common_units", m.common_units},
                     {"k", m.k},
                     {"spearman", optional_number(m.spearman)},
                     {"topk_jaccard", m.topk_jaccard},
                     {"sign_agreement", m.sign_agreement}});
  }
  Json aggregates = Json::array();
  for (const auto& a : r.aggregates) {
    aggregates.push_back({{"first", a.first},
                          {"second", a.second},
                          {"methods", {r.methods[a.first], r.methods[a.second]}},
                          {"spearman", summary_to_json(a.spearman)},
                          {"topk_jaccard", summary_to_json(a.topk_jaccard)},
                          {"sign_agreement", summary_to_json(a.sign_agreement)}});
  }
  Json plaus = Json::array();
  for (const auto& p : r.plausibility) {
    plaus.push_back({{"sample_id", p.sample_id},
                     {"method_index", p.method},
                     {"method", r.methods[p.method]},
                     {"k", p.k},
                     {"score", p.score}});
  }
  Json skipped = Json::array();
  for (const auto& s : r.skipped) {
    skipped.push_back({{"sample_id", s.sample_id.empty() ? Json(nullptr) : Json(s.sample_id)},
                       {"method", s.method},
                       {"reason", s.reason}});
  }
  return {{"scenario", r.scenario_id},
          {"methods", r.methods},
          {"k", r.requested_k ? Json(*r.requested_k) : Json(nullptr)},
          {"seed", r.seed},
          {"target_policy", r.target_policy},
          {"pairs", pairs},
          {"aggregates", aggregates},
          {"plausibility", plaus},
          {"coverage",
           {{"samples_total", r.samples_total},
            {"samples_evaluated", r.samples_evaluated},
            {"skipped", skipped}}}};
}

Json to_json(const Featurizer& f) {
  Json out{{"kind", std::string(to_string(f.kind()))}};
  switch (f.kind()) {
    case FeaturizationKind::tabular_standardized:
    case FeaturizationKind::tabular_raw: {
      const auto& s = f.tabular_state();
      Json fill = Json::array();
      for (const auto& cell : s.fill) fill.push_back(to_json(cell));
      out["schema"] = to_json(s.schema);
      out["means"] = s.means;
      out["stds"] = s.stds;
      out["fill"] = fill;
      break;
    }
    case FeaturizationKind::bag_of_words:
      out["vocabulary"] = f.text_state().vocabulary;
      break;
    case FeaturizationKind::image_patch_means: {
      const auto& s = f.image_state();
      out["grid_rows"] = s.grid_rows;
      out["grid_cols"] = s.grid_cols;
      out["mean_color"] = {s.mean_color.r, s.mean_color.g, s.mean_color.b};
      break;
    }
  }
  return out;
}

Featurizer featurizer_from_json(const Json& document) {
  const std::string path = "featurizer";
  const FeaturizationKind kind = parse_featurization_kind(string_member(document, "kind", path));
  switch (kind) {
    case FeaturizationKind::tabular_standardized:
    case FeaturizationKind::tabular_raw: {
      Featurizer::TabularState s;
      s.schema = schema_from_json(member(document, "schema", path));
      const Eigen::VectorXd means = vector_from_json(member(document, "means", path), path + ".means");
      const Eigen::VectorXd stds = vector_from_json(member(document, "stds", path), path + ".stds");
      s.means.assign(means.data(), means.data() + means.size());
      s.stds.assign(stds.data(), stds.data() + stds.size());
      const Json& fill = array_member(document, "fill", path);
      for (std::size_t i = 0; i < fill.size(); ++i) {
        s.fill.push_back(cell_from_json(fill[i], path + ".fill[" + std::to_string(i) + "]"));
      }
      return Featurizer::tabular(kind, std::move(s));
    }
    case FeaturizationKind::bag_of_words:
      return Featurizer::text(strings_from_json(member(document, "vocabulary", path),
                                                path + ".vocabulary"));
    case FeaturizationKind::image_patch_means: {
      Featurizer::ImageState s;
      s.grid_rows = static_cast<int>(integer_at(member(document, "grid_rows", path), path + ".grid_rows"));
      s.grid_cols = static_cast<int>(integer_at(member(document, "grid_cols", path), path + ".grid_cols"));
      const Json& color = array_member(document, "mean_color", path);
      require(color.size() == 3, ErrorCode::invalid_argument, path + ".mean_color: expected 3 channels");
      std::uint8_t ch[3];
      for (std::size_t i = 0; i < 3; ++i) {
        const auto v = integer_at(color[i], path + ".mean_color");
        require(v >= 0 && v <= 255, ErrorCode::invalid_argument, path + ".mean_color: out of range");
        ch[i] = static_cast<std::uint8_t>(v);
      }
      s.mean_color = Rgb{ch[0], ch[1], ch[2]};
      return Featurizer::image(s);
    }
  }
  fail(ErrorCode::internal, "unreachable");
}

Json to_json(const Model& model) {
  Json out{{"kind", std::string(to_string(kind_of(model)))},
           {"class_labels", as_classifier(model).class_labels()},
           {"featurizer", to_json(featurizer_of(model))}};
  if (const auto* m = std::get_if<LinearModel>(&model)) {
    out["weights"] = matrix_to_json(m->weights());
    out["bias"] = vector_to_json(m->bias());
  } else if (const auto* m = std::get_if<MLPModel>(&model)) {
    Json layers = Json::array();
    for (const auto& layer : m->layers()) {
      layers.push_back({{"weights", matrix_to_json(layer.weights)},
                        {"biases", vector_to_json(layer.biases)}});
    }
    out["layers"] = layers;
  } else {
    Json nodes = Json::array();
    for (const auto& n : std::get<TreeModel>(model).nodes()) {
      if (n.is_leaf()) {
        nodes.push_back({{"distribution", n.distribution}});
        continue;
      }
      Json node{{"feature", n.feature}, {"left", n.left}, {"right", n.right}};
      if (n.categorical) {
        node["left_categories"] = n.left_categories;
      } else {
        node["threshold"] = n.threshold;
      }
      nodes.push_back(std::move(node));
    }
    out["nodes"] = nodes;
  }
  return out;
}

Model model_from_json(const Json& document) {
  const std::string path = "model";
  const ModelKind kind = parse_model_kind(string_member(document, "kind", path));
  auto labels = strings_from_json(member(document, "class_labels", path), path + ".class_labels");
  Featurizer featurizer = featurizer_from_json(member(document, "featurizer", path));
  switch (kind) {
    case ModelKind::logistic:
      return LinearModel(std::move(featurizer), std::move(labels),
                         matrix_from_json(member(document, "weights", path), path + ".weights"),
                         vector_from_json(member(document, "bias", path), path + ".bias"));
    case ModelKind::mlp: {
      const Json& layers = array_member(document, "layers", path);
      std::vector<DenseLayer> out;
      for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::string lp = path + ".layers[" + std::to_string(i) + "]";
        out.push_back({matrix_from_json(member(layers[i], "weights", lp), lp + ".weights"),
                       vector_from_json(member(layers[i], "biases", lp), lp + ".biases")});
      }
      return MLPModel(std::move(featurizer), std::move(labels), std::move(out));
    }
    case ModelKind::tree: {
      const Json& nodes = array_member(document, "nodes", path);
      std::vector<TreeNode> out;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string np = path + ".nodes[" + std::to_string(i) + "]";
        const Json& j = nodes[i];
        TreeNode n;
        if (j.contains("distribution")) {
          const Eigen::VectorXd d = vector_from_json(j["distribution"], np + ".distribution");
          n.distribution.assign(d.data(), d.data() + d.size());
        } else {
          n.feature = static_cast<int>(integer_at(member(j, "feature", np), np + ".feature"));
          n.left = static_cast<int>(integer_at(member(j, "left", np), np + ".left"));
          n.right = static_cast<int>(integer_at(member(j, "right", np), np + ".right"));
          if (j.contains("left_categories")) {
            n.categorical = true;
            const Json& cats = j["left_categories"];
            require(cats.is_array(), ErrorCode::invalid_argument, np + ".left_categories: expected an array");
            for (std::size_t c = 0; c < cats.size(); ++c) {
              n.left_categories.push_back(static_cast<int>(integer_at(cats[c], np + ".left_categories")));
            }
          } else {
            n.threshold = number_at(member(j, "threshold", np), np + ".threshold");
          }
        }
        out.push_back(std::move(n));
      }
      return TreeModel(std::move(featurizer), std::move(labels), std::move(out));
    }
  }
  fail(ErrorCode::internal, "unreachable");
}

Json to_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"epochs", c.epochs},
          {"seed", c.seed},                   {"hidden_sizes", c.hidden_sizes},
          {"max_depth", c.max_depth},         {"min_leaf", c.min_leaf},
          {"image_grid", c.image_grid}};
}

TrainConfig train_config_from_json(const Json& document) {
  TrainConfig c;
  if (document.is_null()) return c;
  require(document.is_object(), ErrorCode::invalid_argument, "config: expected an object");
  for (auto it = document.begin(); it != document.end(); ++it) {
    const std::string& key = it.key();
    const std::string path = "config." + key;
    if (key == "learning_rate") {
      c.learning_rate = number_at(*it, path);
    } else if (key == "epochs") {
      c.epochs = static_cast<int>(integer_at(*it, path));
    } else if (key == "seed") {
      require(it->is_number_unsigned(), ErrorCode::invalid_argument, path + ": expected an unsigned integer");
      c.seed = it->get<std::uint64_t>();
    } else if (key == "hidden_sizes") {
      require(it->is_array(), ErrorCode::invalid_argument, path + ": expected an array");
      c.hidden_sizes.clear();
      for (const auto& h : *it) c.hidden_sizes.push_back(static_cast<int>(integer_at(h, path)));
    } else if (key == "max_depth") {
      c.max_depth = static_cast<int>(integer_at(*it, path));
    } else if (key == "min_leaf") {
      c.min_leaf = static_cast<int>(integer_at(*it, path));
    } else if (key == "image_grid") {
      c.image_grid = static_cast<int>(integer_at(*it, path));
    } else {
      fail(ErrorCode::invalid_argument, path + ": unknown field");
    }
  }
  c.validate();
  return c;
}

ExplainConfig explain_config_from_json(const Json& document, ExplainConfig base) {
  if (document.is_null()) return base;
  require(document.is_object(), ErrorCode::invalid_argument, "config: expected an object");
  for (auto it = document.begin(); it != document.end(); ++it) {
    const std::string& key = it.key();
    const std::string path = "config." + key;
    if (key == "lime") {
      require(it->is_object(), ErrorCode::invalid_argument, path + ": expected an object");
      for (auto l = it->begin(); l != it->end(); ++l) {
        const std::string lp = path + "." + l.key();
        if (l.key() == "num_samples") {
          base.lime.num_samples = static_cast<int>(integer_at(*l, lp));
        } else if (l.key() == "kernel_width") {
          base.lime.kernel_width = number_at(*l, lp);
        } else if (l.key() == "ridge_lambda") {
          base.lime.ridge_lambda = number_at(*l, lp);
        } else {
          fail(ErrorCode::invalid_argument, lp + ": unknown field");
        }
      }
    } else if (key == "shap") {
      require(it->is_object(), ErrorCode::invalid_argument, path + ": expected an object");
      for (auto s = it->begin(); s != it->end(); ++s) {
        const std::string sp = path + "." + s.key();
        if (s.key() == "mode") {
          require(s->is_string(), ErrorCode::invalid_argument, sp + ": expected a string");
          const auto mode = s->get<std::string>();
          if (mode == "exact_enumeration") {
            base.shap_mode = ShapConfig::Mode::exact_enumeration;
          } else if (mode == "sampled") {
            base.shap_mode = ShapConfig::Mode::sampled;
          } else if (mode == "auto") {
            base.shap_mode.reset();
          } else {
            fail(ErrorCode::invalid_argument, sp + ": expected exact_enumeration, sampled or auto");
          }
        } else if (s.key() == "num_coalitions") {
          base.shap_coalitions = static_cast<int>(integer_at(*s, sp));
        } else {
          fail(ErrorCode::invalid_argument, sp + ": unknown field");
        }
      }
    } else if (key == "lrp_epsilon") {
      base.lrp_epsilon = number_at(*it, path);
      require(base.lrp_epsilon >= 0.0, ErrorCode::invalid_argument, path + ": must be >= 0");
    } else if (key == "permutation_repeats") {
      base.permutation_repeats = static_cast<int>(integer_at(*it, path));
    } else if (key == "target") {
      require(it->is_string(), ErrorCode::invalid_argument, path + ": expected a string");
      base.target = it->get<std::string>();
    } else {
      fail(ErrorCode::invalid_argument, path + ": unknown field");
    }
  }
  return base;
}

}  // namespace xplain

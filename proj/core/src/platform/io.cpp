#include "xplain/platform/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "xplain/core/error.hpp"
#include "xplain/platform/serialization.hpp"

namespace xplain {

namespace fs = std::filesystem;

namespace {

// Splits one logical record; quoted fields may span lines.
bool read_record(std::istream& in, std::vector<std::optional<std::string>>& fields,
                 const std::string& source, std::size_t& line) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  bool any = false;
  char c;
  auto finish = [&] {
    if (field.empty()) {
      fields.emplace_back(std::nullopt);
    } else {
      fields.emplace_back(field);
    }
    field.clear();
    was_quoted = false;
  };
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      require(field.empty() && !was_quoted, ErrorCode::invalid_argument,
              source + ":" + std::to_string(line) + ": stray quote");
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      finish();
    } else if (c == '\n') {
      ++line;
      finish();
      return true;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  require(!quoted, ErrorCode::invalid_argument, source + ": unterminated quoted field");
  if (!any) return false;
  finish();
  return true;
}

bool blank(const std::vector<std::optional<std::string>>& fields) {
  return fields.size() == 1 && !fields[0];
}

}  // namespace

RawTable read_csv(std::istream& in, const std::string& source) {
  RawTable table;
  std::vector<std::optional<std::string>> fields;
  std::size_t line = 1;
  require(read_record(in, fields, source, line), ErrorCode::invalid_argument,
          source + ": missing header row");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    require(fields[i].has_value(), ErrorCode::invalid_argument,
            source + ": header column " + std::to_string(i + 1) + " is empty");
    std::string name = *fields[i];
    if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name.erase(0, 3);
    require(seen.insert(name).second, ErrorCode::invalid_argument,
            source + ": duplicate header column " + name);
    table.header.push_back(name);
  }
  while (true) {
    const std::size_t record_line = line;
    if (!read_record(in, fields, source, line)) break;
    if (blank(fields)) continue;
    require(fields.size() == table.header.size(), ErrorCode::invalid_argument,
            source + ":" + std::to_string(record_line) + ": expected " +
                std::to_string(table.header.size()) + " fields, found " +
                std::to_string(fields.size()));
    table.rows.push_back(fields);
  }
  return table;
}

RawTable read_csv_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::not_found, "cannot open " + path.string());
  return read_csv(in, path.string());
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string ppm_token(std::istream& in, const std::string& source) {
  std::string token;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(c);
  }
  require(!token.empty(), ErrorCode::invalid_argument, source + ": truncated header");
  return token;
}

int ppm_int(std::istream& in, const std::string& source) {
  const std::string token = ppm_token(in, source);
  require(!token.empty() && std::all_of(token.begin(), token.end(), ::isdigit),
          ErrorCode::invalid_argument, source + ": bad header value " + token);
  return std::stoi(token);
}

}  // namespace

ImageSample read_ppm(const fs::path& path) {
  const std::string source = path.string();
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::not_found, "cannot open " + source);
  const std::string magic = ppm_token(in, source);
  require(magic == "P6" || magic == "P3", ErrorCode::invalid_argument,
          source + ": not a P6/P3 pixmap");
  const int width = ppm_int(in, source);
  const int height = ppm_int(in, source);
  const int maxval = ppm_int(in, source);
  require(width >= 1 && height >= 1 && width <= 4096 && height <= 4096,
          ErrorCode::invalid_argument, source + ": bad dimensions");
  require(maxval == 255, ErrorCode::invalid_argument, source + ": only maxval 255 is supported");
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<Rgb> pixels(n);
  if (magic == "P6") {
    std::vector<char> bytes(n * 3);
    in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<std::size_t>(in.gcount()) == bytes.size(), ErrorCode::invalid_argument,
            source + ": truncated pixel data");
    for (std::size_t i = 0; i < n; ++i) {
      pixels[i] = Rgb{static_cast<std::uint8_t>(bytes[3 * i]),
                      static_cast<std::uint8_t>(bytes[3 * i + 1]),
                      static_cast<std::uint8_t>(bytes[3 * i + 2])};
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      int ch[3];
      for (int& v : ch) {
        v = ppm_int(in, source);
        require(v <= 255, ErrorCode::invalid_argument, source + ": channel out of range");
      }
      pixels[i] = Rgb{static_cast<std::uint8_t>(ch[0]), static_cast<std::uint8_t>(ch[1]),
                      static_cast<std::uint8_t>(ch[2])};
    }
  }
  return ImageSample(height, width, std::move(pixels));
}

void write_ppm(const fs::path& path, const ImageSample& image) {
  std::string data = "P6\n" + std::to_string(image.width()) + " " +
                     std::to_string(image.height()) + "\n255\n";
  for (const auto& p : image.pixels()) {
    data.push_back(static_cast<char>(p.r));
    data.push_back(static_cast<char>(p.g));
    data.push_back(static_cast<char>(p.b));
  }
  write_file_atomic(path, data);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::not_found, "cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::internal, "cannot write " + temp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    require(out.good(), ErrorCode::internal, "write failed for " + temp.string());
  }
  fs::rename(temp, path);
}

namespace {

Cell parse_cell(const Column& column, const std::optional<std::string>& raw,
                const std::string& where) {
  if (!raw) return std::monostate{};
  switch (column.kind) {
    case ColumnKind::numeric: {
      auto v = parse_number(*raw);
      require(v.has_value(), ErrorCode::invalid_argument,
              where + ": column " + column.name + ": not a number: " + *raw);
      return *v;
    }
    case ColumnKind::boolean: {
      auto v = parse_boolean(*raw);
      require(v.has_value(), ErrorCode::invalid_argument,
              where + ": column " + column.name + ": not a boolean: " + *raw);
      return *v;
    }
    case ColumnKind::categorical:
      return *raw;
  }
  return std::monostate{};
}

}  // namespace

Dataset tabular_dataset(const RawTable& table, const std::string& label_column,
                        const std::string& id, const std::optional<FeatureSchema>& schema) {
  auto label_it = std::find(table.header.begin(), table.header.end(), label_column);
  require(label_it != table.header.end(), ErrorCode::invalid_argument,
          id + ": label column " + label_column + " not found");
  const auto label_index = static_cast<std::size_t>(label_it - table.header.begin());
  require(!table.rows.empty(), ErrorCode::invalid_argument, id + ": dataset has no rows");

  Dataset ds;
  ds.id = id;
  ds.task = TaskKind::tabular;
  if (schema) {
    ds.schema = schema;
  } else {
    std::vector<Column> columns;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c == label_index) continue;
      const auto values = table.column(c);
      Column column;
      column.name = table.header[c];
      try {
        column.kind = infer_kind(values);
      } catch (const Error&) {
        fail(ErrorCode::invalid_argument, id + ": column " + column.name + " is entirely missing");
      }
      if (column.kind == ColumnKind::categorical) {
        std::set<std::string> cats;
        for (const auto& v : values) {
          if (v) cats.insert(*v);
        }
        column.categories.assign(cats.begin(), cats.end());
      }
      columns.push_back(std::move(column));
    }
    ds.schema = FeatureSchema(std::move(columns));
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& label = table.rows[r][label_index];
    require(label.has_value(), ErrorCode::invalid_argument,
            id + ": row " + std::to_string(r + 1) + " has no label");
    ds.samples.emplace_back(tabular_row(*ds.schema, table, r));
    ds.labels.push_back(*label);
  }
  ds.class_labels = distinct_labels(ds.labels);
  ds.validate();
  return ds;
}

Dataset load_tabular_csv(const fs::path& path, const std::string& label_column,
                         const std::string& id) {
  return tabular_dataset(read_csv_file(path), label_column, id);
}

TabularSample tabular_row(const FeatureSchema& schema, const RawTable& table, std::size_t row) {
  require(row < table.rows.size(), ErrorCode::invalid_argument,
          "row " + std::to_string(row + 1) + " does not exist");
  const std::string where = "row " + std::to_string(row + 1);
  TabularSample sample;
  for (const auto& column : schema.columns()) {
    auto it = std::find(table.header.begin(), table.header.end(), column.name);
    require(it != table.header.end(), ErrorCode::invalid_argument,
            "input lacks column " + column.name);
    const auto index = static_cast<std::size_t>(it - table.header.begin());
    sample.values.push_back(parse_cell(column, table.rows[row][index], where));
  }
  validate_tabular(sample, schema, false);
  return sample;
}

Dataset load_text_jsonl(const fs::path& path, const std::string& id,
                        std::vector<std::string>* sample_ids) {
  std::istringstream in(read_file(path));
  Dataset ds;
  ds.id = id;
  ds.task = TaskKind::text;
  std::string line;
  std::size_t number = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(number);
    const Json record = parse_json(line, where);
    const std::string sid = string_member(record, "id", where);
    require(seen.insert(sid).second, ErrorCode::invalid_argument, where + ": duplicate id " + sid);
    ds.samples.emplace_back(TextSample{string_member(record, "text", where)});
    ds.labels.push_back(string_member(record, "label", where));
    if (sample_ids) sample_ids->push_back(sid);
  }
  require(!ds.samples.empty(), ErrorCode::invalid_argument, path.string() + ": no records");
  ds.class_labels = distinct_labels(ds.labels);
  ds.validate();
  return ds;
}

Dataset load_image_folder(const fs::path& directory, const std::string& id,
                          std::vector<std::string>* sample_ids) {
  const RawTable labels = read_csv_file(directory / "labels.csv");
  auto file_col = std::find(labels.header.begin(), labels.header.end(), "file");
  auto label_col = std::find(labels.header.begin(), labels.header.end(), "label");
  require(file_col != labels.header.end() && label_col != labels.header.end(),
          ErrorCode::invalid_argument, (directory / "labels.csv").string() +
                                           ": expected columns file,label");
  const auto fi = static_cast<std::size_t>(file_col - labels.header.begin());
  const auto li = static_cast<std::size_t>(label_col - labels.header.begin());
  Dataset ds;
  ds.id = id;
  ds.task = TaskKind::image;
  for (std::size_t r = 0; r < labels.rows.size(); ++r) {
    const auto& file = labels.rows[r][fi];
    const auto& label = labels.rows[r][li];
    require(file && label, ErrorCode::invalid_argument,
            (directory / "labels.csv").string() + ": row " + std::to_string(r + 1) +
                " is incomplete");
    const fs::path relative(*file);
    require(!relative.is_absolute() && relative.lexically_normal().string().rfind("..", 0) != 0,
            ErrorCode::invalid_argument, "image path escapes the dataset directory: " + *file);
    ds.samples.emplace_back(read_ppm(directory / relative));
    ds.labels.push_back(*label);
    if (sample_ids) sample_ids->push_back(relative.stem().string());
  }
  require(!ds.samples.empty(), ErrorCode::invalid_argument, directory.string() + ": no images");
  ds.class_labels = distinct_labels(ds.labels);
  ds.validate();
  return ds;
}

std::map<std::string, HumanAnnotation> load_annotations(const fs::path& path) {
  const Json doc = parse_json(read_file(path), path.string());
  require(doc.is_object(), ErrorCode::invalid_argument,
          path.string() + ": expected an object mapping sample ids to unit lists");
  std::map<std::string, HumanAnnotation> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string where = path.filename().string() + ": " + it.key();
    require(it->is_array() && !it->empty(), ErrorCode::invalid_argument,
            where + ": expected a nonempty unit list");
    HumanAnnotation annotation;
    annotation.sample_id = it.key();
    for (const auto& unit : *it) {
      require(unit.is_string(), ErrorCode::invalid_argument, where + ": units must be strings");
      annotation.relevant_units.insert(unit.get<std::string>());
    }
    out.emplace(it.key(), std::move(annotation));
  }
  return out;
}

}  // namespace xplain
